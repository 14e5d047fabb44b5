#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mimic {

using Rgb = std::array<std::uint8_t, 3>;

// Interleaved 8-bit RGB image, row-major, row 0 at the top.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {0, 0, 0});

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    Rgb at(int x, int y) const
    {
        const std::size_t i = index(x, y);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int x, int y, Rgb c)
    {
        const std::size_t i = index(x, y);
        data_[i] = c[0];
        data_[i + 1] = c[1];
        data_[i + 2] = c[2];
    }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const RgbImage&) const = default;

private:
    std::size_t index(int x, int y) const
    {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// Single-channel 8-bit image (used for masks on disk).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    bool operator==(const GrayImage&) const = default;
};

// Bilinear sample with clamp-to-edge addressing. (x, y) are continuous pixel
// coordinates where pixel (i, j) has its center at (i + 0.5, j + 0.5).
std::array<double, 3> sample_bilinear(const RgbImage& image, double x, double y);

std::uint8_t to_u8(double v);
Rgb to_rgb(const std::array<double, 3>& v);

}  // namespace mimic
