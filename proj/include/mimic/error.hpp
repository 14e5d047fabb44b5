#pragma once

#include <stdexcept>
#include <string>

namespace mimic {

// Bad input: out-of-range parameters, inconsistent sizes, malformed documents.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem or codec failure. The message always names the path involved.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mimic
