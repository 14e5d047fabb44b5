#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mimic/metrics.hpp"
#include "mimic/pipeline.hpp"

namespace mimic {

// Each command writes its files under `out` and returns a JSON summary. Input
// problems raise ValidationError (or IoError for unreadable files) whose
// message names the offending input.

struct ExtractArgs {
    std::filesystem::path image;
    std::filesystem::path pose;    // pose-sequence JSON
    int frame = 0;                 // which pose of the sequence the image shows
    std::filesystem::path camera;
    std::optional<std::filesystem::path> avatar;  // AvatarConfig JSON; default humanoid otherwise
};
// partial_texture.png, visibility_mask.png
nlohmann::json cmd_extract(const ExtractArgs& args, const PipelineConfig& config);

struct InpaintArgs {
    std::filesystem::path partial;
    std::filesystem::path mask;
    std::optional<std::filesystem::path> avatar;  // islands from this avatar's atlas
    bool single_island = false;                   // treat the whole atlas as one island
};
// complete_texture.png
nlohmann::json cmd_inpaint(const InpaintArgs& args, const PipelineConfig& config);

struct ImitateArgs {
    std::filesystem::path image;   // imitator
    std::filesystem::path pose;    // imitator pose-sequence JSON
    int frame = 0;
    std::filesystem::path camera;  // imitator camera
    std::filesystem::path actor;   // actor pose-sequence JSON
    std::optional<std::filesystem::path> cameras;  // render cameras; the imitator camera otherwise
    std::optional<std::filesystem::path> avatar;
    bool contact_sheet = false;
};
// frames/frame_XXXXXX.png, clip_schedule.json, run_summary.json,
// partial_texture.png, visibility_mask.png, complete_texture.png
nlohmann::json cmd_imitate(const ImitateArgs& args, const PipelineConfig& config);

struct EvaluateArgs {
    std::filesystem::path pred;
    std::filesystem::path gt;
    std::optional<std::filesystem::path> pred_vertices;  // {"frames": [[[x,y,z], ...], ...]}
    std::optional<std::filesystem::path> gt_vertices;
};
// metrics.json; the summary carries the report and its printable table.
nlohmann::json cmd_evaluate(const EvaluateArgs& args, const PipelineConfig& config);

struct MakePairsArgs {
    std::filesystem::path video;   // directory of frame_XXXXXX.png
    std::filesystem::path poses;
    std::filesystem::path camera;
    std::optional<std::filesystem::path> avatar;
};
// inter_XXXXXX.png, target_XXXXXX.png, pairs.json, complete_texture.png
nlohmann::json cmd_make_pairs(const MakePairsArgs& args, const PipelineConfig& config);

// manifest.json plus per-avatar directories (see generate_corpus).
nlohmann::json cmd_gen_corpus(const CorpusSpec& spec, const PipelineConfig& config);

struct OrbitArgs {
    std::optional<std::filesystem::path> texture;  // flat shading without one
    std::optional<std::filesystem::path> pose;
    int frame = 0;
    std::optional<std::filesystem::path> avatar;
    bool contact_sheet = false;
};
// frames/frame_XXXXXX.png, masks/mask_XXXXXX.png, cameras.json, orbit.json
nlohmann::json cmd_orbit(const OrbitArgs& args, const PipelineConfig& config);

// Vertex stream files used by cmd_evaluate.
void save_vertex_stream(const std::filesystem::path& path, const VertexStream& stream);
VertexStream load_vertex_stream(const std::filesystem::path& path);

}  // namespace mimic
