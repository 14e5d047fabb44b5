#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mimic/body_model.hpp"
#include "mimic/inpaint.hpp"
#include "mimic/raster.hpp"
#include "mimic/texture.hpp"

namespace mimic {

struct PoseSequence {
    std::vector<PoseParams> frames;
    double fps = 30.0;

    std::size_t size() const { return frames.size(); }
    std::size_t joint_count() const { return frames.empty() ? 0 : frames.front().joint_rotations.size(); }
    void validate() const;
};

nlohmann::json pose_sequence_to_json(const PoseSequence& sequence);
// Errors name the offending frame index ("frame 5: ...").
PoseSequence pose_sequence_from_json(const nlohmann::json& document);
PoseSequence load_pose_sequence(const std::filesystem::path& path);
void save_pose_sequence(const std::filesystem::path& path, const PoseSequence& sequence);

nlohmann::json camera_to_json(const Camera& camera);
Camera camera_from_json(const nlohmann::json& document);
Camera load_camera(const std::filesystem::path& path);
void save_camera(const std::filesystem::path& path, const Camera& camera);
void save_cameras(const std::filesystem::path& path, std::span<const Camera> cameras);
std::vector<Camera> load_cameras(const std::filesystem::path& path);  // a single camera or {"cameras":[...]}

struct OrbitFraming {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
};

// Smallest orbit radius at which a sphere around all joints (plus a margin
// for geometry beyond the joints) fits the narrower field of view.
OrbitFraming frame_subject(std::span<const Vec3> joints, const Intrinsics& intrinsics, double margin = 0.2);
OrbitFraming frame_sequence(const BodyModel& model, const PoseSequence& sequence, const Intrinsics& intrinsics);

// Camera k sits at azimuth start_deg + k * step_deg around the vertical axis
// through `center`, at the center's height, looking at the center. Azimuth 0
// is on the +z side (in front of a subject facing +z).
std::vector<Camera> orbit_cameras(const Vec3& center, double radius, double start_deg, double step_deg, int count,
                                  const Intrinsics& intrinsics);

// Frame i = rasterize(pose_mesh(model, poses[i]), camera_i, texture). Either
// one camera for all frames or one per frame.
std::vector<FrameBuffers> render_imitation_sequence(const BodyModel& model, const TextureMap& texture,
                                                    const PoseSequence& poses, std::span<const Camera> cameras,
                                                    Rgb background = {0, 0, 0});

struct TrainingPair {
    RgbImage intermediate;
    RgbImage target;
    int frame_index = 0;
};

struct Stage1Options {
    int resolution = 256;
    VisibilityOptions visibility;
    InpaintOptions inpaint;
};

struct Stage1Result {
    PartialTexture partial;
    TextureMap complete;
    double coverage = 0.0;  // visible fraction of mapped texels
};

// Extract the partial texture from one posed view, then inpaint it.
Stage1Result run_stage1(const RgbImage& image, const BodyModel& model, const PoseParams& pose, const Camera& camera,
                        const Stage1Options& options = {});
Stage1Result run_stage1(const RgbImage& image, const BodyModel& model, const PoseParams& pose, const Camera& camera,
                        const TexelAtlasIndex& index, const Stage1Options& options = {});

// Self-supervised pairs: the texture is recovered once from frame 0 and then
// re-rendered at every pose.
std::vector<TrainingPair> make_training_pairs(const BodyModel& model, std::span<const RgbImage> video_frames,
                                              const PoseSequence& poses, const Camera& camera,
                                              const Stage1Options& options = {}, Rgb background = {0, 0, 0});

struct Clip {
    int start = 0;
    int end = 0;  // inclusive
    std::optional<int> condition;  // last frame of the previous clip

    int length() const { return end - start + 1; }
    bool operator==(const Clip&) const = default;
};

struct ClipSchedule {
    int clip_length = 16;
    int sequence_length = 0;
    std::vector<Clip> clips;
};

ClipSchedule chunk_clips(int sequence_length, int clip_length = 16);
nlohmann::json clip_schedule_to_json(const ClipSchedule& schedule);

}  // namespace mimic
