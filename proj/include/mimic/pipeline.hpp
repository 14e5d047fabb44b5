#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mimic/corpus.hpp"
#include "mimic/image.hpp"
#include "mimic/inpaint.hpp"
#include "mimic/texture.hpp"

namespace mimic {

struct PipelineConfig {
    int texture_resolution = 256;
    int resolution = 256;  // rendered frame size for commands that create cameras
    InpaintOptions inpaint;
    VisibilityOptions visibility;
    OrbitSpec orbit{0.0, 12.0, 30};
    int clip_length = 16;
    std::filesystem::path out = "out";
    Rgb background{0, 0, 0};
    std::uint64_t seed = 0;

    void validate() const;
};

void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);  // rejects unknown keys
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// "R,G,B" with components in [0, 255].
Rgb parse_color(const std::string& text);

// Sorted *.png file names (not paths) directly inside `dir`.
std::vector<std::string> list_png_names(const std::filesystem::path& dir);

// Frames laid out row-major in a near-square grid; cells are the size of the
// largest frame, unused area takes `background`.
RgbImage contact_sheet(const std::vector<RgbImage>& frames, Rgb background = {0, 0, 0});

// Per-pixel foreground flags (face_id >= 0) of a rasterization.
std::vector<std::uint8_t> foreground_mask(const FrameBuffers& buffers);

}  // namespace mimic
