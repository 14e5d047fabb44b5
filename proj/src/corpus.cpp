#include "mimic/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "mimic/error.hpp"
#include "mimic/image_io.hpp"
#include "mimic/texture.hpp"

namespace mimic {

namespace {

// Joint order of build_canonical_humanoid.
enum : std::size_t {
    kSpine = 1,
    kLeftShoulder = 6,
    kRightShoulder = 10,
    kRightElbow = 11,
    kLeftHip = 13,
    kLeftKnee = 14,
    kRightHip = 16,
    kRightKnee = 17,
    kJoints = 19,
};

constexpr double kArmsDown = 1.2;  // radians below the T-pose

}  // namespace

const std::vector<std::string>& motion_preset_names()
{
    static const std::vector<std::string> names = {"idle", "walk", "wave", "spin"};
    return names;
}

PoseSequence motion_preset(const std::string& name, int frame_count)
{
    const auto& names = motion_preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ValidationError("unknown motion preset '" + name + "' (expected idle, walk, wave or spin)");
    if (frame_count < 1)
        throw ValidationError("motion preset: frame count must be >= 1");

    PoseSequence seq;
    seq.fps = 30.0;
    for (int k = 0; k < frame_count; ++k) {
        PoseParams p = PoseParams::identity(kJoints);
        if (name == "walk") {
            const double phi = 2.0 * std::numbers::pi * k / kWalkPeriod;
            const double s = std::sin(phi), c = std::cos(phi);
            p.joint_rotations[kLeftHip] = {0.45 * s, 0.0, 0.0};
            p.joint_rotations[kRightHip] = {-0.45 * s, 0.0, 0.0};
            p.joint_rotations[kLeftKnee] = {0.3 * (1.0 - c), 0.0, 0.0};
            p.joint_rotations[kRightKnee] = {0.3 * (1.0 + c), 0.0, 0.0};
            p.joint_rotations[kLeftShoulder] = {-0.35 * s, 0.0, -kArmsDown};
            p.joint_rotations[kRightShoulder] = {0.35 * s, 0.0, kArmsDown};
            p.joint_rotations[kSpine] = {0.0, 0.1 * s, 0.0};
            p.root_translation = {0.0, 0.01 * (1.0 - std::cos(2.0 * phi)), 0.0};
        } else if (name == "wave") {
            const double psi = 2.0 * std::numbers::pi * k / 20.0;
            p.joint_rotations[kLeftShoulder] = {0.0, 0.0, -kArmsDown};
            p.joint_rotations[kRightShoulder] = {0.0, 0.0, -1.0};
            p.joint_rotations[kRightElbow] = {0.0, 0.0, -0.5 + 0.45 * std::sin(psi)};
        } else if (name == "spin") {
            p.root_rotation = {0.0, 2.0 * std::numbers::pi * k / frame_count, 0.0};
        }
        seq.frames.push_back(std::move(p));
    }
    return seq;
}

void CorpusSpec::validate() const
{
    if (n_avatars < 1)
        throw ValidationError("corpus spec: n_avatars must be >= 1");
    if (frames < 1)
        throw ValidationError("corpus spec: frames must be >= 1");
    if (motions.empty())
        throw ValidationError("corpus spec: at least one motion is required");
    for (const std::string& m : motions)
        motion_preset(m, 1);
    if (views.count < 1)
        throw ValidationError("corpus spec: views.count must be >= 1");
    if (resolution < 16)
        throw ValidationError("corpus spec: resolution must be >= 16 pixels");
    check_texture_resolution(texture_resolution);
    if (!(shape_jitter >= 0.0 && shape_jitter < 0.5))
        throw ValidationError("corpus spec: shape_jitter must lie in [0, 0.5)");
    for (const TextureStyle& s : styles)
        s.validate();
}

void to_json(nlohmann::json& j, const CorpusSpec& s)
{
    j = {{"n_avatars", s.n_avatars},
         {"styles", s.styles},
         {"motions", s.motions},
         {"frames", s.frames},
         {"views", {{"start_deg", s.views.start_deg}, {"step_deg", s.views.step_deg}, {"count", s.views.count}}},
         {"resolution", s.resolution},
         {"texture_resolution", s.texture_resolution},
         {"shape_jitter", s.shape_jitter},
         {"background", {s.background[0], s.background[1], s.background[2]}},
         {"seed", s.seed}};
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& what)
{
    if (!j.is_object())
        throw ValidationError(what + ": expected a JSON object");
    for (const auto& item : j.items())
        if (!known.contains(item.key()))
            throw ValidationError(what + ": unknown key '" + item.key() + "'");
}

}  // namespace

void from_json(const nlohmann::json& j, CorpusSpec& s)
{
    reject_unknown(j,
                   {"n_avatars", "styles", "motions", "frames", "views", "resolution", "texture_resolution",
                    "shape_jitter", "background", "seed"},
                   "corpus spec");
    try {
        if (j.contains("n_avatars"))
            s.n_avatars = j.at("n_avatars").get<int>();
        if (j.contains("styles"))
            s.styles = j.at("styles").get<std::vector<TextureStyle>>();
        if (j.contains("motions"))
            s.motions = j.at("motions").get<std::vector<std::string>>();
        if (j.contains("frames"))
            s.frames = j.at("frames").get<int>();
        if (j.contains("views")) {
            const nlohmann::json& v = j.at("views");
            reject_unknown(v, {"start_deg", "step_deg", "count"}, "corpus spec views");
            if (v.contains("start_deg"))
                s.views.start_deg = v.at("start_deg").get<double>();
            if (v.contains("step_deg"))
                s.views.step_deg = v.at("step_deg").get<double>();
            if (v.contains("count"))
                s.views.count = v.at("count").get<int>();
        }
        if (j.contains("resolution"))
            s.resolution = j.at("resolution").get<int>();
        if (j.contains("texture_resolution"))
            s.texture_resolution = j.at("texture_resolution").get<int>();
        if (j.contains("shape_jitter"))
            s.shape_jitter = j.at("shape_jitter").get<double>();
        if (j.contains("background")) {
            const auto bg = j.at("background").get<std::vector<int>>();
            if (bg.size() != 3 || std::any_of(bg.begin(), bg.end(), [](int c) { return c < 0 || c > 255; }))
                throw ValidationError("corpus spec: background must be 3 integers in [0, 255]");
            s.background = {std::uint8_t(bg[0]), std::uint8_t(bg[1]), std::uint8_t(bg[2])};
        }
        if (j.contains("seed"))
            s.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("corpus spec: ") + e.what());
    }
    s.validate();
}

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

double SeededRng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int SeededRng::integer(int lo, int hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

TextureStyle sample_style(SeededRng& rng)
{
    static const Rgb skins[] = {{241, 194, 167}, {224, 172, 138}, {198, 134, 98}, {141, 85, 54}, {92, 58, 40}};
    static const Rgb hairs[] = {{30, 22, 18}, {72, 48, 30}, {150, 110, 60}, {200, 170, 110}, {110, 40, 25}};
    auto color = [&](int lo, int hi) {
        return Rgb{std::uint8_t(rng.integer(lo, hi)), std::uint8_t(rng.integer(lo, hi)),
                   std::uint8_t(rng.integer(lo, hi))};
    };
    TextureStyle s;
    s.skin = skins[rng.integer(0, 4)];
    s.hair = hairs[rng.integer(0, 4)];
    s.shirt = color(30, 225);
    s.pants = color(20, 160);
    const int pattern = rng.integer(0, 9);
    s.pattern = pattern < 4 ? Pattern::none : pattern < 7 ? Pattern::stripes : Pattern::checker;
    s.period = 16 * rng.integer(3, 5);
    s.pattern_color = color(30, 225);
    s.sleeve_fraction = rng.uniform(0.1, 1.0);
    s.hair_fraction = rng.uniform(0.25, 0.45);
    return s;
}

AvatarConfig sample_avatar_config(SeededRng& rng, double jitter)
{
    nlohmann::json j = AvatarConfig{};
    for (auto& item : j.items())
        if (item.value().is_number_float())
            item.value() = item.value().get<double>() * rng.uniform(1.0 - jitter, 1.0 + jitter);
    AvatarConfig config = j.get<AvatarConfig>();
    config.validate();
    return config;
}

namespace {

std::string view_label(double deg)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", deg);
    return buf;
}

std::string avatar_id(int a)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "avatar_%03d", a);
    return buf;
}

struct FileLog {
    const std::filesystem::path& root;
    nlohmann::json sha = nlohmann::json::object();

    std::string add(const std::filesystem::path& relative)
    {
        const std::string key = relative.generic_string();
        sha[key] = sha256_file(root / relative);
        return key;
    }
};

}  // namespace

nlohmann::json generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir)
{
    spec.validate();
    const Intrinsics intrinsics = default_intrinsics(spec.resolution, spec.resolution);
    nlohmann::json avatars = nlohmann::json::array();

    for (int a = 0; a < spec.n_avatars; ++a) {
        SeededRng rng(spec.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(a + 1));
        const AvatarConfig config = sample_avatar_config(rng, spec.shape_jitter);
        const TextureStyle style = spec.styles.empty() ? sample_style(rng)
                                                       : spec.styles[static_cast<std::size_t>(a) % spec.styles.size()];
        const BodyModel model = build_canonical_humanoid(config);
        const TextureMap texture = generate_procedural_texture(style, model, spec.texture_resolution);

        const std::string id = avatar_id(a);
        const std::filesystem::path dir(id);
        FileLog log{out_dir};
        nlohmann::json entry = {{"id", id}};

        write_text_atomic(out_dir / dir / "avatar.json", nlohmann::json(config).dump(1) + "\n");
        entry["avatar_config"] = log.add(dir / "avatar.json");
        write_text_atomic(out_dir / dir / "style.json", nlohmann::json(style).dump(1) + "\n");
        entry["style"] = log.add(dir / "style.json");
        write_png(out_dir / dir / "texture.png", texture.texels());
        entry["texture"] = log.add(dir / "texture.png");

        nlohmann::json poses = nlohmann::json::array();
        nlohmann::json videos = nlohmann::json::array();
        nlohmann::json all_frames = nlohmann::json::array();
        for (const std::string& motion : spec.motions) {
            const PoseSequence seq = motion_preset(motion, spec.frames);
            const std::filesystem::path pose_file = dir / ("poses_" + motion + ".json");
            save_pose_sequence(out_dir / pose_file, seq);
            const std::string pose_key = log.add(pose_file);
            poses.push_back(pose_key);

            const OrbitFraming framing = frame_sequence(model, seq, intrinsics);
            const std::vector<Camera> cameras = orbit_cameras(framing.center, framing.radius, spec.views.start_deg,
                                                              spec.views.step_deg, spec.views.count, intrinsics);
            for (int v = 0; v < spec.views.count; ++v) {
                const double deg = spec.views.start_deg + v * spec.views.step_deg;
                const std::filesystem::path vdir = dir / (motion + "_view" + view_label(deg));
                save_camera(out_dir / vdir / "camera.json", cameras[static_cast<std::size_t>(v)]);
                nlohmann::json video = {{"motion", motion},
                                        {"view_deg", deg},
                                        {"poses", pose_key},
                                        {"camera", log.add(vdir / "camera.json")}};
                const Camera single[] = {cameras[static_cast<std::size_t>(v)]};
                const std::vector<FrameBuffers> frames =
                    render_imitation_sequence(model, texture, seq, single, spec.background);
                nlohmann::json names = nlohmann::json::array();
                for (std::size_t f = 0; f < frames.size(); ++f) {
                    const std::filesystem::path file = vdir / numbered_name("frame_", static_cast<int>(f) + 1);
                    write_png(out_dir / file, frames[f].color);
                    const std::string key = log.add(file);
                    names.push_back(key);
                    all_frames.push_back(key);
                }
                video["frames"] = std::move(names);
                videos.push_back(std::move(video));
            }
        }
        entry["poses"] = std::move(poses);
        entry["videos"] = std::move(videos);
        entry["frames"] = std::move(all_frames);
        entry["sha256"] = std::move(log.sha);
        avatars.push_back(std::move(entry));
    }

    nlohmann::json manifest = {{"spec", spec}, {"avatars", std::move(avatars)}};
    write_text_atomic(out_dir / "manifest.json", manifest.dump(1) + "\n");
    return manifest;
}

nlohmann::json load_corpus_manifest(const std::filesystem::path& corpus_dir)
{
    const std::filesystem::path path = corpus_dir / "manifest.json";
    try {
        nlohmann::json manifest = nlohmann::json::parse(read_text(path));
        if (!manifest.is_object() || !manifest.contains("avatars") || !manifest.at("avatars").is_array())
            throw ValidationError("missing 'avatars' list");
        return manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<std::string> verify_corpus(const std::filesystem::path& corpus_dir)
{
    const nlohmann::json manifest = load_corpus_manifest(corpus_dir);
    std::vector<std::string> problems;
    std::set<std::string> listed;
    for (const nlohmann::json& avatar : manifest.at("avatars")) {
        for (const auto& item : avatar.at("sha256").items()) {
            listed.insert(item.key());
            const std::filesystem::path file = corpus_dir / item.key();
            if (!std::filesystem::is_regular_file(file))
                problems.push_back("missing: " + item.key());
            else if (sha256_file(file) != item.value().get<std::string>())
                problems.push_back("checksum mismatch: " + item.key());
        }
    }
    std::vector<std::string> unlisted;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(corpus_dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string rel = std::filesystem::relative(entry.path(), corpus_dir).generic_string();
        if (rel != "manifest.json" && !listed.contains(rel))
            unlisted.push_back("unlisted: " + rel);
    }
    std::sort(unlisted.begin(), unlisted.end());
    problems.insert(problems.end(), unlisted.begin(), unlisted.end());
    return problems;
}

}  // namespace mimic
