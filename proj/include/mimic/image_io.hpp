#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mimic/image.hpp"

namespace mimic {

// All writers go through a temp file in the target directory followed by a
// rename, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const GrayImage& image);

void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png(const std::filesystem::path& path, const GrayImage& image);

// Gray and RGBA inputs are converted; alpha is dropped.
RgbImage read_png_rgb(const std::filesystem::path& path);
// RGB inputs are reduced by taking the first channel.
GrayImage read_png_gray(const std::filesystem::path& path);

// Little-endian raw array plus "<path>.json" sidecar {"shape":[h,w],"dtype":...}.
void write_raw_f64(const std::filesystem::path& path, std::span<const double> values, int height, int width);
void write_raw_i32(const std::filesystem::path& path, std::span<const std::int32_t> values, int height, int width);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);

// "frame_000001.png" style names; index is 1-based by convention of callers.
std::string numbered_name(std::string_view prefix, int index, std::string_view ext = ".png");

}  // namespace mimic
