// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Every tolerance is pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mimic/corpus.hpp"
#include "mimic/image_io.hpp"
#include "mimic/metrics.hpp"
#include "mimic/motion.hpp"
#include "mimic/pipeline.hpp"
#include "mimic/texture.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mimic;
namespace fs = std::filesystem;

namespace {

// Criterion 1
constexpr int kAvatars = 10;
constexpr int kCorpusResolution = 256;
constexpr double kRoundTripForegroundMae = 8.0;  // 8-bit units
constexpr double kVisibleTexelMae = 2.0;
constexpr double kRoundTripSeconds = 60.0;
// Criterion 2
constexpr double kViewSeparationDeg = 30.0;
constexpr double kViewpointMae = 4.0;
// Criterion 3: union coverage of the 30-view orbit on the default humanoid at
// 256 texels, measured once (0.843797) and frozen.
constexpr double kFrozenOrbitCoverage = 0.8437;
constexpr double kAzimuthTolDeg = 1e-9;
// Criterion 4
constexpr int kProcrustesCases = 100;
constexpr double kExactRecoveryMm = 1e-6;
constexpr double kPaBelowMpvpeSlackMm = 1e-9;
constexpr int kUmeyamaCases = 20;
constexpr double kUmeyamaTolMm = 1e-9;
// Criterion 5
constexpr double kPsnrHalfGray = 6.0206;
constexpr double kPsnrTolDb = 1e-3;
constexpr double kSsimTol = 1e-9;
// Criterion 6
constexpr int kSelfImitationFrames = 30;
constexpr double kSelfImitationMae = 8.0;
constexpr double kSelfImitationSsim = 0.95;
// Criterion 7
constexpr int kRandomClipCases = 1000;
// Criterion 9
constexpr int kSoups = 200;
constexpr int kSoupSize = 64;
constexpr int kTrianglesPerSoup = 16;
constexpr double kEdgeMargin = 1e-9;  // pixels this close to an edge are reported, not judged
constexpr double kSoupDepthTol = 1e-9;

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, int digits = 4)
{
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

std::string q(const fs::path& p)
{
    return "\"" + p.string() + "\"";
}

struct CorpusVideo {
    BodyModel model;
    TextureMap texture;
    PoseSequence poses;
    Camera camera;
    fs::path frames_dir;
    std::vector<fs::path> frames;
    fs::path avatar_file, poses_file, camera_file;
};

std::vector<CorpusVideo> load_videos(const fs::path& root, const nlohmann::json& manifest)
{
    std::vector<CorpusVideo> out;
    for (const auto& a : manifest["avatars"]) {
        const auto& v = a["videos"][0];
        const fs::path avatar_file = root / a["avatar_config"].get<std::string>();
        CorpusVideo cv{build_canonical_humanoid(nlohmann::json::parse(read_text(avatar_file))),
                       TextureMap(read_png_rgb(root / a["texture"].get<std::string>())),
                       load_pose_sequence(root / v["poses"].get<std::string>()),
                       load_camera(root / v["camera"].get<std::string>()),
                       {},
                       {},
                       avatar_file,
                       root / v["poses"].get<std::string>(),
                       root / v["camera"].get<std::string>()};
        for (const auto& f : v["frames"])
            cv.frames.push_back(root / f.get<std::string>());
        cv.frames_dir = cv.frames.front().parent_path();
        out.push_back(std::move(cv));
    }
    return out;
}

double foreground_mae(const RgbImage& a, const RgbImage& b, const FrameBuffers& geometry)
{
    return masked_mae(a, b, foreground_mask(geometry));
}

Outcome criterion1(const std::vector<CorpusVideo>& videos)
{
    Outcome o;
    double worst_fg = 0.0, worst_tex = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const CorpusVideo& v = videos[i];
        const PoseParams& pose = v.poses.frames[0];
        const RgbImage source = read_png_rgb(v.frames[0]);
        Stage1Options opts;
        opts.resolution = v.texture.resolution();
        const Stage1Result st = run_stage1(source, v.model, pose, v.camera, opts);
        const PoseSequence one{{pose}, v.poses.fps};
        const FrameBuffers again = render_imitation_sequence(v.model, st.complete, one, std::span(&v.camera, 1))[0];
        const double fg = foreground_mae(again.color, source, again);

        double sum = 0.0;
        std::size_t n = 0;
        const auto& got = st.partial.texture.texels().data();
        const auto& truth = v.texture.texels().data();
        for (std::size_t t = 0; t < st.partial.mask.size(); ++t)
            if (st.partial.mask.at_index(t)) {
                for (int k = 0; k < 3; ++k)
                    sum += std::abs(int(got[3 * t + k]) - int(truth[3 * t + k]));
                ++n;
            }
        const double tex = n ? sum / (3.0 * n) : 0.0;
        worst_fg = std::max(worst_fg, fg);
        worst_tex = std::max(worst_tex, tex);
        if (fg > kRoundTripForegroundMae || tex > kVisibleTexelMae || n == 0) {
            o.pass = false;
            o.detail += " avatar " + std::to_string(i) + " fg " + fmt(fg) + " texel " + fmt(tex) + ";";
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds >= kRoundTripSeconds)
        o.pass = false;
    o.detail = "worst foreground MAE " + fmt(worst_fg) + "/255, worst visible-texel MAE " + fmt(worst_tex) +
               "/255, " + fmt(seconds, 3) + " s" + o.detail;
    return o;
}

Outcome criterion2(const std::vector<CorpusVideo>& videos)
{
    Outcome o;
    double worst = 0.0;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const CorpusVideo& v = videos[i];
        const PoseParams& pose = v.poses.frames[0];
        const Intrinsics k = default_intrinsics(kCorpusResolution, kCorpusResolution);
        const OrbitFraming f = frame_sequence(v.model, v.poses, k);
        const auto cams = orbit_cameras(f.center, f.radius, 0.0, kViewSeparationDeg, 2, k);
        const auto frames = render_turntable(v.model, pose, v.texture, cams);
        const TexelAtlasIndex idx = build_atlas_index(v.model, v.texture.resolution());
        const PartialTexture a = extract_partial_texture(frames[0].color, v.model, pose, cams[0], idx);
        const PartialTexture b = extract_partial_texture(frames[1].color, v.model, pose, cams[1], idx);
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t t = 0; t < a.mask.size(); ++t)
            if (a.mask.at_index(t) && b.mask.at_index(t)) {
                for (int c = 0; c < 3; ++c)
                    sum += std::abs(int(a.texture.texels().data()[3 * t + c]) -
                                    int(b.texture.texels().data()[3 * t + c]));
                ++n;
            }
        const double mae = n ? sum / (3.0 * n) : 1e9;
        worst = std::max(worst, mae);
        if (mae > kViewpointMae) {
            o.pass = false;
            o.detail += " avatar " + std::to_string(i) + " " + fmt(mae) + ";";
        }
    }
    o.detail = "worst mutual-texel MAE " + fmt(worst) + "/255" + o.detail;
    return o;
}

double wrapped_azimuth(const Camera& cam, const Vec3& center)
{
    const Vec3 d = cam.center() - center;
    double a = std::atan2(d.x(), d.z()) * 180.0 / std::numbers::pi;
    if (a < -kAzimuthTolDeg)
        a += 360.0;
    return a;
}

Outcome criterion3()
{
    Outcome o;
    const Intrinsics k = default_intrinsics();
    const Vec3 center(0, 0.2, 0);
    const auto full = orbit_cameras(center, 4.0, 0.0, 12.0, 30, k);
    const auto arc = orbit_cameras(center, 4.0, 150.0, 3.0, 16, k);
    auto check_set = [&](const std::vector<Camera>& cams, double start, double step, std::size_t count) {
        if (cams.size() != count)
            return false;
        for (std::size_t i = 0; i < cams.size(); ++i)
            if (std::abs(wrapped_azimuth(cams[i], center) - (start + step * static_cast<double>(i))) > kAzimuthTolDeg)
                return false;
        return true;
    };
    const bool full_ok = check_set(full, 0.0, 12.0, 30);
    const bool arc_ok = check_set(arc, 150.0, 3.0, 16) &&
                        std::abs(wrapped_azimuth(arc.back(), center) - 195.0) <= kAzimuthTolDeg;

    const BodyModel m = build_canonical_humanoid();
    const TexelAtlasIndex idx = build_atlas_index(m, 256);
    const auto masks = sample_orbit_masks(m, PoseParams::identity(m.joint_count()), 30, idx, k);
    const double coverage = union_coverage(masks, idx);
    o.pass = full_ok && arc_ok && masks.size() == 30 && coverage >= kFrozenOrbitCoverage;
    o.detail = std::string("30 views 0..348 deg ") + (full_ok ? "ok" : "WRONG") + ", 16 views 150..195 deg " +
               (arc_ok ? "ok" : "WRONG") + ", union coverage " + fmt(coverage, 6) + " (frozen >= " +
               fmt(kFrozenOrbitCoverage) + ")";
    return o;
}

std::vector<Vec3> random_points(std::mt19937_64& rng, int n)
{
    std::vector<Vec3> p;
    for (int i = 0; i < n; ++i)
        p.push_back(testing::random_vec(rng, -1.0, 1.0));
    return p;
}

std::vector<Vec3> random_similarity(std::mt19937_64& rng, const std::vector<Vec3>& p)
{
    const double s = testing::uniform(rng, 0.2, 5.0);
    const Mat3 r = oracle::axis_angle(testing::random_vec(rng, -3.0, 3.0));
    const Vec3 t = testing::random_vec(rng, -10.0, 10.0);
    std::vector<Vec3> out;
    for (const Vec3& v : p)
        out.push_back(s * r * v + t);
    return out;
}

Outcome criterion4()
{
    Outcome o;
    std::mt19937_64 rng(kSeed);
    double worst_exact = 0.0;
    for (int t = 0; t < kProcrustesCases; ++t) {
        const auto gt = random_points(rng, 30);
        worst_exact = std::max(worst_exact, pa_mpvpe(random_similarity(rng, gt), gt));
    }
    int violations = 0;
    double worst_excess = -1e300;
    for (int t = 0; t < kProcrustesCases; ++t) {
        const auto gt = random_points(rng, 30);
        std::vector<Vec3> pred = gt;
        const double amp = testing::uniform(rng, 0.001, 0.2);
        for (Vec3& v : pred)
            v += amp * testing::random_vec(rng, -1.0, 1.0);
        if (t % 2 == 1)
            pred = random_similarity(rng, pred);
        const double excess = pa_mpvpe(pred, gt) - mpvpe(pred, gt);
        worst_excess = std::max(worst_excess, excess);
        if (excess > kPaBelowMpvpeSlackMm)
            ++violations;
    }
    double worst_oracle = 0.0;
    for (int t = 0; t < kUmeyamaCases; ++t) {
        const auto gt = random_points(rng, 30);
        std::vector<Vec3> pred = random_similarity(rng, gt);
        pred[static_cast<std::size_t>(t)] += testing::random_vec(rng, -0.3, 0.3);
        worst_oracle = std::max(worst_oracle, std::abs(pa_mpvpe(pred, gt) - oracle::pa_mpvpe(pred, gt)));
    }
    o.pass = worst_exact < kExactRecoveryMm && violations == 0 && worst_oracle <= kUmeyamaTolMm;
    o.detail = "exact recovery max " + fmt(worst_exact, 3) + " mm, PA > MPVPE in " + std::to_string(violations) + "/" +
               std::to_string(kProcrustesCases) + " perturbed pairs (max PA-MPVPE " + fmt(worst_excess, 3) +
               " mm), Umeyama max diff " + fmt(worst_oracle, 3) + " mm";
    return o;
}

Outcome criterion5()
{
    Outcome o;
    // 127.5 is not an 8-bit value, so mid-gray is a 127/128 checkerboard.
    const RgbImage black(32, 32), white(32, 32, {255, 255, 255});
    RgbImage mid(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            const std::uint8_t v = (x + y) % 2 ? 127 : 128;
            mid.set(x, y, {v, v, v});
        }
    // MSE = (127^2 + 128^2)/2 = 127.5^2 + 0.25; the offset moves PSNR by 7e-5 dB.
    const double p = psnr(black, mid);
    const double s_id = ssim(mid, mid);
    const double c1 = std::pow(0.01 * 255.0, 2);
    const double s_const = ssim(black, white);
    const double s_closed = c1 / (255.0 * 255.0 + c1);
    RgbImage half(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 16; x < 32; ++x)
            half.set(x, y, {255, 255, 255});
    const double l = l1(half, black);
    o.pass = std::abs(p - kPsnrHalfGray) <= kPsnrTolDb && std::abs(s_id - 1.0) <= kSsimTol &&
             std::abs(s_const - s_closed) <= kSsimTol && l == 0.5;
    o.detail = "PSNR " + fmt(p, 7) + " dB, SSIM identity " + fmt(s_id, 12) + ", SSIM constant pair " +
               fmt(s_const, 7) + " vs " + fmt(s_closed, 7) + ", L1 " + fmt(l, 12);
    return o;
}

Outcome criterion6(const std::vector<CorpusVideo>& videos, const fs::path& scratch)
{
    Outcome o;
    double worst_mae = 0.0, worst_ssim = 1.0;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const CorpusVideo& v = videos[i];
        const fs::path out = scratch / ("imitate_" + std::to_string(i));
        const auto r = testing::run_cli("--out " + q(out) + " imitate --image " + q(v.frames[0]) + " --pose " +
                                            q(v.poses_file) + " --camera " + q(v.camera_file) + " --actor " +
                                            q(v.poses_file) + " --avatar " + q(v.avatar_file),
                                        scratch);
        if (r.exit_code != 0) {
            o.pass = false;
            o.detail += " avatar " + std::to_string(i) + " exit " + std::to_string(r.exit_code) + ": " + r.err;
            continue;
        }
        const auto names = list_png_names(out / "frames");
        if (static_cast<int>(names.size()) != kSelfImitationFrames || v.frames.size() != names.size()) {
            o.pass = false;
            o.detail += " avatar " + std::to_string(i) + " produced " + std::to_string(names.size()) + " frames;";
            continue;
        }
        double ssim_sum = 0.0;
        for (std::size_t f = 0; f < names.size(); ++f) {
            const RgbImage pred = read_png_rgb(out / "frames" / names[f]);
            const RgbImage gt = read_png_rgb(v.frames[f]);
            const FrameBuffers geometry = rasterize(pose_mesh(v.model, v.poses.frames[f]), v.camera, nullptr);
            const double mae = foreground_mae(pred, gt, geometry);
            worst_mae = std::max(worst_mae, mae);
            if (mae > kSelfImitationMae) {
                o.pass = false;
                o.detail += " avatar " + std::to_string(i) + " frame " + std::to_string(f) + " MAE " + fmt(mae) + ";";
            }
            ssim_sum += ssim(pred, gt);
        }
        const double mean_ssim = ssim_sum / static_cast<double>(names.size());
        worst_ssim = std::min(worst_ssim, mean_ssim);
        if (mean_ssim < kSelfImitationSsim) {
            o.pass = false;
            o.detail += " avatar " + std::to_string(i) + " mean SSIM " + fmt(mean_ssim) + ";";
        }
    }
    o.detail = std::to_string(videos.size()) + " avatars x " + std::to_string(kSelfImitationFrames) +
               " frames, worst foreground MAE " + fmt(worst_mae) + "/255, worst mean SSIM " + fmt(worst_ssim) +
               o.detail;
    return o;
}

bool schedule_ok(int n, int f)
{
    const ClipSchedule s = chunk_clips(n, f);
    int next = 0;
    for (std::size_t k = 0; k < s.clips.size(); ++k) {
        const Clip& c = s.clips[k];
        if (c.start != next || c.end < c.start)
            return false;
        const bool last = k + 1 == s.clips.size();
        if ((!last && c.length() != f) || c.length() > f)
            return false;
        if (k == 0 ? c.condition.has_value() : c.condition != s.clips[k - 1].end)
            return false;
        next = c.end + 1;
    }
    return next == n && s.clip_length == f && s.sequence_length == n;
}

Outcome criterion7()
{
    Outcome o;
    for (int n : {1, 10, 16, 32, 40, 100})
        if (!schedule_ok(n, 16)) {
            o.pass = false;
            o.detail += " length " + std::to_string(n) + " F 16 broken;";
        }
    // The worked examples.
    const ClipSchedule s40 = chunk_clips(40, 16);
    const bool example = s40.clips.size() == 3 && s40.clips[2].length() == 8 && s40.clips[1].condition == 15 &&
                         s40.clips[2].condition == 31;
    o.pass = o.pass && example;
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<int> len(1, 2000), clip(1, 128);
    int bad = 0;
    for (int t = 0; t < kRandomClipCases; ++t)
        bad += !schedule_ok(len(rng), clip(rng));
    o.pass = o.pass && bad == 0;
    o.detail = "fixed lengths " + std::string(o.detail.empty() ? "ok" : "FAILED") + ", random pairs failing " +
               std::to_string(bad) + "/" + std::to_string(kRandomClipCases) + o.detail;
    return o;
}

// Checksums of every file under `root`, with timing fields dropped from run summaries.
std::map<std::string, std::string> fingerprint(const fs::path& root)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file())
            continue;
        const std::string rel = fs::relative(e.path(), root).generic_string();
        if (e.path().filename() == "run_summary.json") {
            nlohmann::json j = nlohmann::json::parse(read_text(e.path()));
            for (auto it = j.begin(); it != j.end();)
                it = it.key().ends_with("_seconds") ? j.erase(it) : std::next(it);
            const std::string text = j.dump();
            out[rel] = sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
        } else {
            out[rel] = sha256_file(e.path());
        }
    }
    return out;
}

Outcome criterion8(const fs::path& scratch)
{
    Outcome o;
    std::vector<std::map<std::string, std::string>> runs;
    std::vector<std::string> tables;
    for (int run = 0; run < 2; ++run) {
        const fs::path root = scratch / ("det_" + std::to_string(run));
        const auto g = testing::run_cli("--out " + q(root / "corpus") +
                                            " --seed 99 --resolution 128 gen-corpus --avatars 2 --frames 12",
                                        scratch);
        const nlohmann::json manifest = load_corpus_manifest(root / "corpus");
        const auto& a = manifest["avatars"][0];
        const auto& v = a["videos"][0];
        const fs::path c = root / "corpus";
        const auto im = testing::run_cli(
            "--out " + q(root / "imitate") + " --seed 99 --resolution 128 imitate --image " +
                q(c / v["frames"][0].get<std::string>()) + " --pose " + q(c / v["poses"].get<std::string>()) +
                " --camera " + q(c / v["camera"].get<std::string>()) + " --actor " +
                q(c / manifest["avatars"][1]["poses"][0].get<std::string>()) + " --avatar " +
                q(c / a["avatar_config"].get<std::string>()) + " --contact-sheet",
            scratch);
        const auto ev = testing::run_cli("--out " + q(root / "evaluate") + " evaluate --pred " +
                                             q(root / "imitate" / "frames") + " --gt " +
                                             q((c / v["frames"][0].get<std::string>()).parent_path()),
                                         scratch);
        if (g.exit_code || im.exit_code || ev.exit_code) {
            o.pass = false;
            o.detail = " a command failed: " + g.err + im.err + ev.err;
            return o;
        }
        runs.push_back(fingerprint(root));
        tables.push_back(ev.out);
    }
    std::size_t differing = 0;
    for (const auto& [path, hash] : runs[0]) {
        const auto it = runs[1].find(path);
        if (it == runs[1].end() || it->second != hash) {
            ++differing;
            o.detail += " " + path;
        }
    }
    differing += runs[0].size() != runs[1].size();
    o.pass = differing == 0 && tables[0] == tables[1] && runs[0].size() > 30;
    o.detail = std::to_string(runs[0].size()) + " files compared, " + std::to_string(differing) + " differ" +
               (tables[0] == tables[1] ? "" : ", metrics tables differ") + o.detail;
    return o;
}

Outcome criterion9()
{
    Outcome o;
    std::mt19937_64 rng(kSeed);
    const Camera cam(Intrinsics{40.0, 40.0, 32.0, 32.0, kSoupSize, kSoupSize}, Mat3::Identity(), Vec3::Zero());
    std::size_t judged = 0, foreground = 0, ambiguous = 0, mismatches = 0;
    for (int soup = 0; soup < kSoups; ++soup) {
        std::vector<Vec3> verts;
        auto topo = std::make_shared<MeshTopology>();
        for (int t = 0; t < kTrianglesPerSoup; ++t) {
            const Vec3 c = testing::random_vec(rng, -0.8, 0.8);
            const double z = testing::uniform(rng, 1.0, 5.0);
            const int b = static_cast<int>(verts.size());
            for (int k = 0; k < 3; ++k) {
                Vec3 p = c + testing::random_vec(rng, -0.6, 0.6);
                p.z() = z + testing::uniform(rng, -0.5, 0.5);
                verts.push_back(Vec3(p.x() * p.z(), p.y() * p.z(), p.z()));
            }
            topo->faces.push_back({b, b + 1, b + 2});
            topo->face_uvs.push_back({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)});
        }
        const Mesh mesh{verts, topo};
        const FrameBuffers fb = rasterize(mesh, cam, nullptr);
        for (int y = 0; y < kSoupSize; ++y)
            for (int x = 0; x < kSoupSize; ++x) {
                double best = std::numeric_limits<double>::infinity();
                int best_face = -1;
                bool unsure = false;
                for (std::size_t f = 0; f < topo->faces.size(); ++f) {
                    const auto& face = topo->faces[f];
                    const Vec3 &a = verts[face[0]], &b = verts[face[1]], &c = verts[face[2]];
                    const auto strict = oracle::ray_hit(cam, x + 0.5, y + 0.5, a, b, c, kEdgeMargin);
                    const auto loose = oracle::ray_hit(cam, x + 0.5, y + 0.5, a, b, c, -kEdgeMargin);
                    unsure = unsure || (loose.has_value() != strict.has_value());
                    if (strict && *strict < best) {
                        best = *strict;
                        best_face = static_cast<int>(f);
                    }
                }
                if (unsure) {
                    ++ambiguous;
                    continue;
                }
                ++judged;
                const std::size_t i = fb.index(x, y);
                foreground += best_face >= 0;
                const bool ok = best_face < 0 ? fb.face_id[i] == -1
                                              : fb.face_id[i] == best_face &&
                                                    std::abs(fb.depth[i] - best) <= kSoupDepthTol * best;
                mismatches += !ok;
            }
    }
    o.pass = mismatches == 0 && foreground > 0;
    o.detail = std::to_string(kSoups) + " soups, " + std::to_string(judged) + " pixels judged (" +
               std::to_string(foreground) + " foreground), " + std::to_string(mismatches) + " mismatches, " +
               std::to_string(ambiguous) + " edge-ambiguous pixels skipped";
    return o;
}

}  // namespace

int main()
{
    testing::TempDir scratch("acceptance");
    CorpusSpec spec;
    spec.n_avatars = kAvatars;
    spec.frames = kSelfImitationFrames;
    spec.resolution = kCorpusResolution;
    spec.texture_resolution = 256;
    spec.seed = kSeed;
    const fs::path corpus_dir = scratch / "corpus";
    const nlohmann::json manifest = generate_corpus(spec, corpus_dir);
    const std::vector<CorpusVideo> videos = load_videos(corpus_dir, manifest);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"stage-1 round trip", [&] { return criterion1(videos); }},
        {"viewpoint invariance", [&] { return criterion2(videos); }},
        {"orbit protocol", [] { return criterion3(); }},
        {"procrustes", [] { return criterion4(); }},
        {"metric analytics", [] { return criterion5(); }},
        {"self-imitation", [&] { return criterion6(videos, scratch.path()); }},
        {"clip scheduling", [] { return criterion7(); }},
        {"determinism", [&] { return criterion8(scratch.path()); }},
        {"occlusion oracle", [] { return criterion9(); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
                  << "): " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
