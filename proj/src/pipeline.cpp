#include "mimic/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mimic/error.hpp"
#include "mimic/image_io.hpp"

namespace mimic {

void PipelineConfig::validate() const
{
    check_texture_resolution(texture_resolution);
    if (resolution < 16)
        throw ValidationError("config: resolution must be >= 16 pixels");
    inpaint.validate();
    visibility.validate();
    if (orbit.count < 1)
        throw ValidationError("config: orbit.count must be >= 1");
    if (clip_length < 1)
        throw ValidationError("config: clip_length must be >= 1");
}

void to_json(nlohmann::json& j, const PipelineConfig& c)
{
    j = {{"texture_resolution", c.texture_resolution},
         {"resolution", c.resolution},
         {"inpaint", c.inpaint},
         {"visibility",
          {{"depth_tolerance", c.visibility.depth_tolerance},
           {"max_view_angle_deg", c.visibility.max_view_angle_deg},
           {"sample_depth_tolerance", c.visibility.sample_depth_tolerance}}},
         {"orbit", {{"start_deg", c.orbit.start_deg}, {"step_deg", c.orbit.step_deg}, {"count", c.orbit.count}}},
         {"clip_length", c.clip_length},
         {"out", c.out.generic_string()},
         {"background", {c.background[0], c.background[1], c.background[2]}},
         {"seed", c.seed}};
}

namespace {

void check_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& what)
{
    if (!j.is_object())
        throw ValidationError(what + ": expected a JSON object");
    for (const auto& item : j.items())
        if (!known.contains(item.key()))
            throw ValidationError(what + ": unknown key '" + item.key() + "'");
}

}  // namespace

void from_json(const nlohmann::json& j, PipelineConfig& c)
{
    check_keys(j,
               {"texture_resolution", "resolution", "inpaint", "visibility", "orbit", "clip_length", "out",
                "background", "seed"},
               "config");
    try {
        if (j.contains("texture_resolution"))
            c.texture_resolution = j.at("texture_resolution").get<int>();
        if (j.contains("resolution"))
            c.resolution = j.at("resolution").get<int>();
        if (j.contains("inpaint"))
            c.inpaint = j.at("inpaint").get<InpaintOptions>();
        if (j.contains("visibility")) {
            const nlohmann::json& v = j.at("visibility");
            check_keys(v, {"depth_tolerance", "max_view_angle_deg", "sample_depth_tolerance"}, "config visibility");
            if (v.contains("depth_tolerance"))
                c.visibility.depth_tolerance = v.at("depth_tolerance").get<double>();
            if (v.contains("max_view_angle_deg"))
                c.visibility.max_view_angle_deg = v.at("max_view_angle_deg").get<double>();
            if (v.contains("sample_depth_tolerance"))
                c.visibility.sample_depth_tolerance = v.at("sample_depth_tolerance").get<double>();
        }
        if (j.contains("orbit")) {
            const nlohmann::json& o = j.at("orbit");
            check_keys(o, {"start_deg", "step_deg", "count"}, "config orbit");
            if (o.contains("start_deg"))
                c.orbit.start_deg = o.at("start_deg").get<double>();
            if (o.contains("step_deg"))
                c.orbit.step_deg = o.at("step_deg").get<double>();
            if (o.contains("count"))
                c.orbit.count = o.at("count").get<int>();
        }
        if (j.contains("clip_length"))
            c.clip_length = j.at("clip_length").get<int>();
        if (j.contains("out"))
            c.out = j.at("out").get<std::string>();
        if (j.contains("background")) {
            const auto bg = j.at("background").get<std::vector<int>>();
            if (bg.size() != 3 || std::any_of(bg.begin(), bg.end(), [](int v) { return v < 0 || v > 255; }))
                throw ValidationError("config: background must be 3 integers in [0, 255]");
            c.background = {std::uint8_t(bg[0]), std::uint8_t(bg[1]), std::uint8_t(bg[2])};
        }
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    c.validate();
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path)
{
    try {
        return nlohmann::json::parse(read_text(path)).get<PipelineConfig>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Rgb parse_color(const std::string& text)
{
    std::istringstream in(text);
    std::string part;
    std::vector<int> values;
    while (std::getline(in, part, ',')) {
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size() || v < 0 || v > 255)
            throw ValidationError("color '" + text + "' must be R,G,B with components in [0, 255]");
        values.push_back(v);
    }
    if (values.size() != 3)
        throw ValidationError("color '" + text + "' must be R,G,B with components in [0, 255]");
    return {std::uint8_t(values[0]), std::uint8_t(values[1]), std::uint8_t(values[2])};
}

std::vector<std::string> list_png_names(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir))
        throw IoError(dir.string() + ": not a directory");
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

RgbImage contact_sheet(const std::vector<RgbImage>& frames, Rgb background)
{
    if (frames.empty())
        throw ValidationError("contact sheet: no frames");
    int cell_w = 0, cell_h = 0;
    for (const RgbImage& f : frames) {
        cell_w = std::max(cell_w, f.width());
        cell_h = std::max(cell_h, f.height());
    }
    const int n = static_cast<int>(frames.size());
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    RgbImage sheet(cols * cell_w, rows * cell_h, background);
    for (int i = 0; i < n; ++i) {
        const RgbImage& f = frames[static_cast<std::size_t>(i)];
        const int ox = (i % cols) * cell_w, oy = (i / cols) * cell_h;
        for (int y = 0; y < f.height(); ++y)
            for (int x = 0; x < f.width(); ++x)
                sheet.set(ox + x, oy + y, f.at(x, y));
    }
    return sheet;
}

std::vector<std::uint8_t> foreground_mask(const FrameBuffers& buffers)
{
    std::vector<std::uint8_t> mask(buffers.face_id.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = buffers.face_id[i] >= 0 ? 1 : 0;
    return mask;
}

}  // namespace mimic
