#include "mimic/motion.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "mimic/error.hpp"
#include "mimic/image_io.hpp"

namespace mimic {

void PoseSequence::validate() const
{
    if (frames.empty())
        throw ValidationError("pose sequence: no frames");
    if (!(fps > 0.0) || !std::isfinite(fps))
        throw ValidationError("pose sequence: fps must be positive");
    const std::size_t joints = joint_count();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].joint_rotations.size() != joints)
            throw ValidationError("frame " + std::to_string(i) + ": expected " + std::to_string(joints) +
                                  " joint rotations, got " + std::to_string(frames[i].joint_rotations.size()));
        try {
            frames[i].validate();
        } catch (const ValidationError& e) {
            throw ValidationError("frame " + std::to_string(i) + ": " + e.what());
        }
    }
}

namespace {

nlohmann::json vec_json(const Vec3& v)
{
    return nlohmann::json::array({v.x(), v.y(), v.z()});
}

// Throws a plain message; callers add the location.
Vec3 vec_from_json(const nlohmann::json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(what + " must be an array of 3 numbers");
    Vec3 v;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!j[k].is_number())
            throw ValidationError(what + " must contain only numbers");
        v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
        if (!std::isfinite(v[static_cast<Eigen::Index>(k)]))
            throw ValidationError(what + " is not finite");
    }
    return v;
}

double number_from_json(const nlohmann::json& j, const std::string& what)
{
    if (!j.is_number())
        throw ValidationError(what + " must be a number");
    return j.get<double>();
}

const nlohmann::json& field(const nlohmann::json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string("missing field '") + key + "'");
    return j.at(key);
}

nlohmann::json parse_json_file(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace

nlohmann::json pose_sequence_to_json(const PoseSequence& sequence)
{
    nlohmann::json frames = nlohmann::json::array();
    for (const PoseParams& p : sequence.frames) {
        nlohmann::json rotations = nlohmann::json::array();
        for (const Vec3& r : p.joint_rotations)
            rotations.push_back(vec_json(r));
        frames.push_back({{"root_rotation", vec_json(p.root_rotation)},
                          {"root_translation", vec_json(p.root_translation)},
                          {"scale", p.scale},
                          {"joint_rotations", std::move(rotations)}});
    }
    return {{"fps", sequence.fps}, {"joints", sequence.joint_count()}, {"frames", std::move(frames)}};
}

PoseSequence pose_sequence_from_json(const nlohmann::json& document)
{
    if (!document.is_object())
        throw ValidationError("pose sequence: expected a JSON object");
    PoseSequence seq;
    seq.fps = number_from_json(field(document, "fps"), "pose sequence: fps");
    const nlohmann::json& joints_json = field(document, "joints");
    if (!joints_json.is_number_integer() || joints_json.get<long long>() < 1)
        throw ValidationError("pose sequence: joints must be a positive integer");
    const auto joints = static_cast<std::size_t>(joints_json.get<long long>());
    const nlohmann::json& frames = field(document, "frames");
    if (!frames.is_array())
        throw ValidationError("pose sequence: frames must be an array");
    if (frames.empty())
        throw ValidationError("pose sequence: frame list is empty");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        try {
            const nlohmann::json& f = frames[i];
            PoseParams pose;
            pose.root_rotation = vec_from_json(field(f, "root_rotation"), "root_rotation");
            pose.root_translation = vec_from_json(field(f, "root_translation"), "root_translation");
            pose.scale = number_from_json(field(f, "scale"), "scale");
            const nlohmann::json& rotations = field(f, "joint_rotations");
            if (!rotations.is_array() || rotations.size() != joints)
                throw ValidationError("joint_rotations must list " + std::to_string(joints) + " rotations");
            for (std::size_t j = 0; j < joints; ++j)
                pose.joint_rotations.push_back(
                    vec_from_json(rotations[j], "joint_rotations[" + std::to_string(j) + "]"));
            pose.validate();
            seq.frames.push_back(std::move(pose));
        } catch (const ValidationError& e) {
            throw ValidationError("frame " + std::to_string(i) + ": " + e.what());
        }
    }
    seq.validate();
    return seq;
}

PoseSequence load_pose_sequence(const std::filesystem::path& path)
{
    try {
        return pose_sequence_from_json(parse_json_file(path));
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.starts_with(path.string()))
            throw;
        throw ValidationError(path.string() + ": " + msg);
    }
}

void save_pose_sequence(const std::filesystem::path& path, const PoseSequence& sequence)
{
    sequence.validate();
    write_text_atomic(path, pose_sequence_to_json(sequence).dump(1) + "\n");
}

nlohmann::json camera_to_json(const Camera& camera)
{
    nlohmann::json rotation = nlohmann::json::array();
    for (int r = 0; r < 3; ++r)
        rotation.push_back({camera.rotation(r, 0), camera.rotation(r, 1), camera.rotation(r, 2)});
    return {{"fx", camera.fx},         {"fy", camera.fy},         {"cx", camera.cx},
            {"cy", camera.cy},         {"width", camera.width},   {"height", camera.height},
            {"rotation", rotation},    {"translation", vec_json(camera.translation)}};
}

Camera camera_from_json(const nlohmann::json& document)
{
    try {
        Intrinsics k;
        k.fx = number_from_json(field(document, "fx"), "fx");
        k.fy = number_from_json(field(document, "fy"), "fy");
        k.cx = number_from_json(field(document, "cx"), "cx");
        k.cy = number_from_json(field(document, "cy"), "cy");
        const nlohmann::json& w = field(document, "width");
        const nlohmann::json& h = field(document, "height");
        if (!w.is_number_integer() || !h.is_number_integer())
            throw ValidationError("width and height must be integers");
        k.width = w.get<int>();
        k.height = h.get<int>();
        const nlohmann::json& rot = field(document, "rotation");
        if (!rot.is_array() || rot.size() != 3)
            throw ValidationError("rotation must be a 3x3 array");
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            r.row(i) = vec_from_json(rot[static_cast<std::size_t>(i)], "rotation row").transpose();
        if (!(r * r.transpose() - Mat3::Identity()).isZero(1e-6) || r.determinant() < 0.0)
            throw ValidationError("rotation is not a proper rotation matrix");
        const Vec3 t = vec_from_json(field(document, "translation"), "translation");
        return Camera(k, r, t);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("camera: ") + e.what());
    }
}

Camera load_camera(const std::filesystem::path& path)
{
    try {
        return camera_from_json(parse_json_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_camera(const std::filesystem::path& path, const Camera& camera)
{
    write_text_atomic(path, camera_to_json(camera).dump(1) + "\n");
}

void save_cameras(const std::filesystem::path& path, std::span<const Camera> cameras)
{
    nlohmann::json list = nlohmann::json::array();
    for (const Camera& c : cameras)
        list.push_back(camera_to_json(c));
    write_text_atomic(path, nlohmann::json{{"cameras", std::move(list)}}.dump(1) + "\n");
}

std::vector<Camera> load_cameras(const std::filesystem::path& path)
{
    const nlohmann::json document = parse_json_file(path);
    try {
        if (document.is_object() && document.contains("cameras")) {
            const nlohmann::json& list = document.at("cameras");
            if (!list.is_array() || list.empty())
                throw ValidationError("'cameras' must be a nonempty array");
            std::vector<Camera> cameras;
            for (const nlohmann::json& c : list)
                cameras.push_back(camera_from_json(c));
            return cameras;
        }
        return {camera_from_json(document)};
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

OrbitFraming frame_subject(std::span<const Vec3> joints, const Intrinsics& intrinsics, double margin)
{
    if (joints.empty())
        throw ValidationError("frame_subject: no joints");
    Vec3 lo = joints.front(), hi = joints.front();
    for (const Vec3& j : joints) {
        lo = lo.cwiseMin(j);
        hi = hi.cwiseMax(j);
    }
    OrbitFraming framing;
    framing.center = 0.5 * (lo + hi);
    double rho = 0.0;
    for (const Vec3& j : joints)
        rho = std::max(rho, (j - framing.center).norm());
    rho += margin;
    const double half_h = std::atan(0.5 * intrinsics.height / intrinsics.fy);
    const double half_w = std::atan(0.5 * intrinsics.width / intrinsics.fx);
    framing.radius = rho / std::sin(std::min(half_h, half_w));
    return framing;
}

OrbitFraming frame_sequence(const BodyModel& model, const PoseSequence& sequence, const Intrinsics& intrinsics)
{
    sequence.validate();
    std::vector<Vec3> all;
    for (const PoseParams& p : sequence.frames) {
        const std::vector<Vec3> joints = joint_positions(model, p);
        all.insert(all.end(), joints.begin(), joints.end());
    }
    return frame_subject(all, intrinsics);
}

std::vector<Camera> orbit_cameras(const Vec3& center, double radius, double start_deg, double step_deg, int count,
                                  const Intrinsics& intrinsics)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ValidationError("orbit_cameras: radius must be positive");
    if (count < 1)
        throw ValidationError("orbit_cameras: count must be >= 1");
    std::vector<Camera> cameras;
    cameras.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double theta = (start_deg + k * step_deg) * std::numbers::pi / 180.0;
        const Vec3 eye = center + radius * Vec3(std::sin(theta), 0.0, std::cos(theta));
        cameras.push_back(Camera::look_at(intrinsics, eye, center));
    }
    return cameras;
}

std::vector<FrameBuffers> render_imitation_sequence(const BodyModel& model, const TextureMap& texture,
                                                    const PoseSequence& poses, std::span<const Camera> cameras,
                                                    Rgb background)
{
    poses.validate();
    if (cameras.size() != 1 && cameras.size() != poses.size())
        throw ValidationError("render_imitation_sequence: " + std::to_string(cameras.size()) + " cameras for " +
                              std::to_string(poses.size()) + " poses (expected 1 or one per pose)");
    const TextureMap padded = prepare_render_texture(model, texture);
    std::vector<FrameBuffers> frames;
    frames.reserve(poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) {
        const Camera& camera = cameras.size() == 1 ? cameras[0] : cameras[i];
        frames.push_back(rasterize(pose_mesh(model, poses.frames[i]), camera, &padded, background));
    }
    return frames;
}

Stage1Result run_stage1(const RgbImage& image, const BodyModel& model, const PoseParams& pose, const Camera& camera,
                        const Stage1Options& options)
{
    return run_stage1(image, model, pose, camera, build_atlas_index(model, options.resolution), options);
}

Stage1Result run_stage1(const RgbImage& image, const BodyModel& model, const PoseParams& pose, const Camera& camera,
                        const TexelAtlasIndex& index, const Stage1Options& options)
{
    PartialTexture partial = extract_partial_texture(image, model, pose, camera, index, options.visibility);
    const IslandMap islands = IslandMap::from_atlas(model.topology(), index);
    TextureMap complete = inpaint_texture(partial.texture, partial.mask, islands, options.inpaint);
    const std::size_t mapped = index.mapped_count();
    const double coverage = mapped == 0 ? 0.0 : static_cast<double>(partial.mask.count()) / static_cast<double>(mapped);
    return {std::move(partial), std::move(complete), coverage};
}

std::vector<TrainingPair> make_training_pairs(const BodyModel& model, std::span<const RgbImage> video_frames,
                                              const PoseSequence& poses, const Camera& camera,
                                              const Stage1Options& options, Rgb background)
{
    poses.validate();
    if (video_frames.size() != poses.size())
        throw ValidationError("make_training_pairs: " + std::to_string(video_frames.size()) + " video frames but " +
                              std::to_string(poses.size()) + " poses");
    const Stage1Result stage1 = run_stage1(video_frames[0], model, poses.frames[0], camera, options);
    const Camera single[] = {camera};
    std::vector<FrameBuffers> renders = render_imitation_sequence(model, stage1.complete, poses, single, background);
    std::vector<TrainingPair> pairs;
    pairs.reserve(renders.size());
    for (std::size_t i = 0; i < renders.size(); ++i)
        pairs.push_back({std::move(renders[i].color), video_frames[i], static_cast<int>(i)});
    return pairs;
}

ClipSchedule chunk_clips(int sequence_length, int clip_length)
{
    if (sequence_length < 1)
        throw ValidationError("chunk_clips: sequence length must be >= 1");
    if (clip_length < 1)
        throw ValidationError("chunk_clips: clip length must be >= 1");
    ClipSchedule schedule{clip_length, sequence_length, {}};
    for (int start = 0; start < sequence_length; start += clip_length) {
        Clip clip;
        clip.start = start;
        clip.end = std::min(start + clip_length, sequence_length) - 1;
        if (!schedule.clips.empty())
            clip.condition = schedule.clips.back().end;
        schedule.clips.push_back(clip);
    }
    return schedule;
}

nlohmann::json clip_schedule_to_json(const ClipSchedule& schedule)
{
    nlohmann::json clips = nlohmann::json::array();
    for (const Clip& c : schedule.clips) {
        nlohmann::json j = {{"start", c.start}, {"end", c.end}, {"length", c.length()}};
        j["condition"] = c.condition ? nlohmann::json(*c.condition) : nlohmann::json(nullptr);
        clips.push_back(std::move(j));
    }
    return {{"clip_length", schedule.clip_length},
            {"sequence_length", schedule.sequence_length},
            {"clip_count", schedule.clips.size()},
            {"clips", std::move(clips)}};
}

}  // namespace mimic
