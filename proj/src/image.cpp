#include "mimic/image.hpp"

#include <algorithm>
#include <cmath>

#include "mimic/error.hpp"

namespace mimic {

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height)
{
    if (width < 0 || height < 0)
        throw ValidationError("image dimensions must be non-negative");
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill[0];
        data_[i + 1] = fill[1];
        data_[i + 2] = fill[2];
    }
}

std::array<double, 3> sample_bilinear(const RgbImage& image, double x, double y)
{
    const double fx = x - 0.5;
    const double fy = y - 0.5;
    const double x0f = std::floor(fx);
    const double y0f = std::floor(fy);
    const double tx = fx - x0f;
    const double ty = fy - y0f;
    const int x0 = static_cast<int>(x0f);
    const int y0 = static_cast<int>(y0f);
    auto clampx = [&](int v) { return std::clamp(v, 0, image.width() - 1); };
    auto clampy = [&](int v) { return std::clamp(v, 0, image.height() - 1); };
    const Rgb c00 = image.at(clampx(x0), clampy(y0));
    const Rgb c10 = image.at(clampx(x0 + 1), clampy(y0));
    const Rgb c01 = image.at(clampx(x0), clampy(y0 + 1));
    const Rgb c11 = image.at(clampx(x0 + 1), clampy(y0 + 1));
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c) {
        const double top = c00[c] * (1.0 - tx) + c10[c] * tx;
        const double bottom = c01[c] * (1.0 - tx) + c11[c] * tx;
        out[c] = top * (1.0 - ty) + bottom * ty;
    }
    return out;
}

std::uint8_t to_u8(double v)
{
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

Rgb to_rgb(const std::array<double, 3>& v)
{
    return {to_u8(v[0]), to_u8(v[1]), to_u8(v[2])};
}

}  // namespace mimic
