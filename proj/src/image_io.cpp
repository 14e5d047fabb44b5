#include "mimic/image_io.hpp"

#include <png.h>

#include <openssl/evp.h>

#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mimic/error.hpp"

namespace mimic {

namespace fs = std::filesystem;

namespace {

std::atomic<unsigned> g_temp_counter{0};

struct PngWriteBuffer {
    std::vector<std::uint8_t> bytes;
};

void png_write_callback(png_structp png, png_bytep data, png_size_t length)
{
    auto* buffer = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
    buffer->bytes.insert(buffer->bytes.end(), data, data + length);
}

void png_flush_callback(png_structp) {}

void png_error_callback(png_structp png, png_const_charp message)
{
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    *text = message;
    png_longjmp(png, 1);
}

void png_warning_callback(png_structp, png_const_charp) {}

std::vector<std::uint8_t> encode(int width, int height, int color_type, int channels,
                                 const std::vector<std::uint8_t>& pixels)
{
    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_callback,
                                              png_warning_callback);
    if (!png)
        throw IoError("png: cannot allocate writer");
    png_infop info = png_create_info_struct(png);
    PngWriteBuffer buffer;
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png encode: " + error);
    }
    png_set_write_fn(png, &buffer, png_write_callback, png_flush_callback);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width) * channels);
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    return std::move(buffer.bytes);
}

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;  // after expansion: 1 (gray), 2 (gray+alpha), 3, 4
    std::vector<std::uint8_t> pixels;
};

Decoded decode(const fs::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file(path);
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
    const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
    image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    Decoded out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.channels = gray ? 1 : 3;
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    return out;
}

template <typename T>
void write_raw(const fs::path& path, std::span<const T> values, int height, int width, const char* dtype)
{
    if (values.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
        throw ValidationError("raw dump: value count does not match shape");
    static_assert(std::endian::native == std::endian::little, "raw dumps assume a little-endian host");
    std::vector<std::uint8_t> bytes(values.size() * sizeof(T));
    std::memcpy(bytes.data(), values.data(), bytes.size());
    write_file_atomic(path, bytes);
    nlohmann::json sidecar = {{"shape", {height, width}}, {"dtype", dtype}, {"byte_order", "little"}};
    write_text_atomic(fs::path(path.string() + ".json"), sidecar.dump(2) + "\n");
}

}  // namespace

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes)
{
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    const fs::path temp = fs::path(path.string() + ".tmp" + std::to_string(g_temp_counter.fetch_add(1)));
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + temp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw IoError("write failed: " + temp.string());
    }
    fs::rename(temp, path, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IoError("cannot rename into place: " + path.string());
    }
}

void write_text_atomic(const fs::path& path, std::string_view text)
{
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

std::string read_text(const fs::path& path)
{
    const auto bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

std::vector<std::uint8_t> encode_png(const RgbImage& image)
{
    return encode(image.width(), image.height(), PNG_COLOR_TYPE_RGB, 3, image.data());
}

std::vector<std::uint8_t> encode_png(const GrayImage& image)
{
    return encode(image.width, image.height, PNG_COLOR_TYPE_GRAY, 1, image.data);
}

void write_png(const fs::path& path, const RgbImage& image)
{
    write_file_atomic(path, encode_png(image));
}

void write_png(const fs::path& path, const GrayImage& image)
{
    write_file_atomic(path, encode_png(image));
}

RgbImage read_png_rgb(const fs::path& path)
{
    const Decoded d = decode(path);
    RgbImage image(d.width, d.height);
    if (d.channels == 3) {
        image.data() = d.pixels;
    } else {
        for (std::size_t i = 0; i < d.pixels.size(); ++i) {
            image.data()[i * 3] = d.pixels[i];
            image.data()[i * 3 + 1] = d.pixels[i];
            image.data()[i * 3 + 2] = d.pixels[i];
        }
    }
    return image;
}

GrayImage read_png_gray(const fs::path& path)
{
    const Decoded d = decode(path);
    GrayImage image{d.width, d.height, {}};
    if (d.channels == 1) {
        image.data = d.pixels;
    } else {
        image.data.resize(static_cast<std::size_t>(d.width) * static_cast<std::size_t>(d.height));
        for (std::size_t i = 0; i < image.data.size(); ++i)
            image.data[i] = d.pixels[i * 3];
    }
    return image;
}

void write_raw_f64(const fs::path& path, std::span<const double> values, int height, int width)
{
    write_raw(path, values, height, width, "float64");
}

void write_raw_i32(const fs::path& path, std::span<const std::int32_t> values, int height, int width)
{
    write_raw(path, values, height, width, "int32");
}

std::string sha256_hex(std::span<const std::uint8_t> bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw IoError("sha256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < length; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return out.str();
}

std::string sha256_file(const fs::path& path)
{
    return sha256_hex(read_file(path));
}

std::string numbered_name(std::string_view prefix, int index, std::string_view ext)
{
    char digits[32];
    std::snprintf(digits, sizeof(digits), "%06d", index);
    return std::string(prefix) + digits + std::string(ext);
}

}  // namespace mimic
