#pragma once

#include <cstdint>
#include <vector>

#include "mimic/image.hpp"

namespace mimic {

// Square RGB atlas. Texel (col, row) covers u in [col, col+1)/res and
// v in [row, row+1)/res; row 0 is the top row of the stored image.
class TextureMap {
public:
    TextureMap() = default;
    explicit TextureMap(int resolution, Rgb fill = {0, 0, 0});
    // Takes ownership of a square image; throws if not square or < 8 texels.
    explicit TextureMap(RgbImage texels);

    int resolution() const { return texels_.width(); }
    const RgbImage& texels() const { return texels_; }
    RgbImage& texels() { return texels_; }
    Rgb at(int col, int row) const { return texels_.at(col, row); }
    void set(int col, int row, Rgb c) { texels_.set(col, row, c); }

    bool operator==(const TextureMap&) const = default;

private:
    RgbImage texels_;
};

class VisibilityMask {
public:
    VisibilityMask() = default;
    explicit VisibilityMask(int resolution, bool fill = false);

    int resolution() const { return resolution_; }
    bool at(int col, int row) const { return bits_[index(col, row)] != 0; }
    void set(int col, int row, bool visible) { bits_[index(col, row)] = visible ? 1 : 0; }
    bool at_index(std::size_t i) const { return bits_[i] != 0; }
    void set_index(std::size_t i, bool visible) { bits_[i] = visible ? 1 : 0; }
    std::size_t size() const { return bits_.size(); }
    std::size_t count() const;

    // 255 = visible, 0 = hidden. Any nonzero gray value reads back as visible.
    GrayImage to_gray() const;
    static VisibilityMask from_gray(const GrayImage& image);

    bool operator==(const VisibilityMask&) const = default;

private:
    std::size_t index(int col, int row) const
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(col);
    }

    int resolution_ = 0;
    std::vector<std::uint8_t> bits_;
};

constexpr int kMinTextureResolution = 8;

void check_texture_resolution(int resolution);

}  // namespace mimic
