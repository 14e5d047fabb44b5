#include "mimic/commands.hpp"

#include <chrono>
#include <set>

#include "mimic/error.hpp"
#include "mimic/image_io.hpp"
#include "mimic/metrics.hpp"
#include "mimic/motion.hpp"

namespace mimic {

namespace {

BodyModel load_model(const std::optional<std::filesystem::path>& avatar)
{
    return build_canonical_humanoid(avatar ? load_avatar_config(*avatar) : AvatarConfig{});
}

PoseParams load_pose_frame(const std::filesystem::path& path, int frame)
{
    const PoseSequence seq = load_pose_sequence(path);
    if (frame < 0 || static_cast<std::size_t>(frame) >= seq.size())
        throw ValidationError(path.string() + ": frame " + std::to_string(frame) + " requested but the sequence has " +
                              std::to_string(seq.size()) + " frames");
    return seq.frames[static_cast<std::size_t>(frame)];
}

Stage1Options stage1_options(const PipelineConfig& config)
{
    Stage1Options o;
    o.resolution = config.texture_resolution;
    o.visibility = config.visibility;
    o.inpaint = config.inpaint;
    return o;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    write_text_atomic(path, j.dump(1) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class F>
auto in_stage(const char* stage, F&& body)
{
    try {
        return body();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(stage) + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(std::string(stage) + ": " + e.what());
    }
}

}  // namespace

nlohmann::json cmd_extract(const ExtractArgs& args, const PipelineConfig& config)
{
    config.validate();
    const BodyModel model = load_model(args.avatar);
    const PoseParams pose = load_pose_frame(args.pose, args.frame);
    const Camera camera = load_camera(args.camera);
    const RgbImage image = read_png_rgb(args.image);
    const PartialTexture partial =
        extract_partial_texture(image, model, pose, camera, config.texture_resolution, config.visibility);
    write_png(config.out / "partial_texture.png", partial.texture.texels());
    write_png(config.out / "visibility_mask.png", partial.mask.to_gray());
    const TexelAtlasIndex index = build_atlas_index(model, config.texture_resolution);
    return {{"partial_texture", (config.out / "partial_texture.png").string()},
            {"visibility_mask", (config.out / "visibility_mask.png").string()},
            {"visible_texels", partial.mask.count()},
            {"coverage", static_cast<double>(partial.mask.count()) / static_cast<double>(index.mapped_count())}};
}

nlohmann::json cmd_inpaint(const InpaintArgs& args, const PipelineConfig& config)
{
    config.validate();
    const TextureMap partial(read_png_rgb(args.partial));
    const VisibilityMask mask = VisibilityMask::from_gray(read_png_gray(args.mask));
    if (mask.resolution() != partial.resolution())
        throw ValidationError(args.mask.string() + ": mask is " + std::to_string(mask.resolution()) +
                              " texels but the partial texture is " + std::to_string(partial.resolution()));
    IslandMap islands;
    if (args.single_island) {
        islands = IslandMap::single(partial.resolution());
    } else {
        const BodyModel model = load_model(args.avatar);
        islands = IslandMap::from_atlas(model.topology(), build_atlas_index(model, partial.resolution()));
    }
    const TextureMap complete = inpaint_texture(partial, mask, islands, config.inpaint);
    write_png(config.out / "complete_texture.png", complete.texels());
    return {{"complete_texture", (config.out / "complete_texture.png").string()}, {"visible_texels", mask.count()}};
}

nlohmann::json cmd_imitate(const ImitateArgs& args, const PipelineConfig& config)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    struct Inputs {
        BodyModel model;
        PoseParams pose;
        Camera camera;
        RgbImage image;
        PoseSequence actor;
        std::vector<Camera> cameras;
    };
    const Inputs in = in_stage("inputs", [&] {
        BodyModel model = load_model(args.avatar);
        PoseParams pose = load_pose_frame(args.pose, args.frame);
        Camera camera = load_camera(args.camera);
        RgbImage image = read_png_rgb(args.image);
        PoseSequence actor = load_pose_sequence(args.actor);
        std::vector<Camera> cameras = args.cameras ? load_cameras(*args.cameras) : std::vector<Camera>{camera};
        return Inputs{std::move(model), std::move(pose), camera, std::move(image), std::move(actor),
                      std::move(cameras)};
    });

    const auto stage1_start = std::chrono::steady_clock::now();
    const Stage1Result stage1 =
        in_stage("stage1", [&] { return run_stage1(in.image, in.model, in.pose, in.camera, stage1_options(config)); });
    const double stage1_seconds = seconds_since(stage1_start);
    write_png(config.out / "partial_texture.png", stage1.partial.texture.texels());
    write_png(config.out / "visibility_mask.png", stage1.partial.mask.to_gray());
    write_png(config.out / "complete_texture.png", stage1.complete.texels());

    const auto render_start = std::chrono::steady_clock::now();
    const std::vector<FrameBuffers> frames = in_stage("render", [&] {
        return render_imitation_sequence(in.model, stage1.complete, in.actor, in.cameras, config.background);
    });
    std::vector<RgbImage> colors;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        write_png(config.out / "frames" / numbered_name("frame_", static_cast<int>(i) + 1), frames[i].color);
        if (args.contact_sheet)
            colors.push_back(frames[i].color);
    }
    const double render_seconds = seconds_since(render_start);

    const ClipSchedule schedule = chunk_clips(static_cast<int>(frames.size()), config.clip_length);
    const nlohmann::json schedule_json = clip_schedule_to_json(schedule);
    write_json(config.out / "clip_schedule.json", schedule_json);
    if (args.contact_sheet)
        write_png(config.out / "contact_sheet.png", contact_sheet(colors, config.background));

    nlohmann::json clip_lengths = nlohmann::json::array();
    for (const Clip& c : schedule.clips)
        clip_lengths.push_back(c.length());
    nlohmann::json summary = {{"frame_count", frames.size()},
                              {"stage1_calls", 1},
                              {"texture_coverage", stage1.coverage},
                              {"clip_length", schedule.clip_length},
                              {"clip_count", schedule.clips.size()},
                              {"clip_lengths", std::move(clip_lengths)},
                              {"seed", config.seed},
                              {"stage1_seconds", stage1_seconds},
                              {"render_seconds", render_seconds},
                              {"total_seconds", seconds_since(start)}};
    write_json(config.out / "run_summary.json", summary);
    return summary;
}

nlohmann::json cmd_evaluate(const EvaluateArgs& args, const PipelineConfig& config)
{
    const std::vector<std::string> pred_names = list_png_names(args.pred);
    const std::vector<std::string> gt_names = list_png_names(args.gt);
    if (pred_names.empty())
        throw ValidationError(args.pred.string() + ": no PNG frames");
    const std::set<std::string> pred_set(pred_names.begin(), pred_names.end());
    const std::set<std::string> gt_set(gt_names.begin(), gt_names.end());
    std::string missing;
    for (const std::string& n : gt_names)
        if (!pred_set.contains(n))
            missing += (missing.empty() ? "" : ", ") + args.pred.string() + "/" + n;
    for (const std::string& n : pred_names)
        if (!gt_set.contains(n))
            missing += (missing.empty() ? "" : ", ") + args.gt.string() + "/" + n;
    if (!missing.empty())
        throw ValidationError("frame sets differ; missing: " + missing);

    std::vector<RgbImage> pred, gt;
    for (const std::string& n : pred_names) {
        pred.push_back(read_png_rgb(args.pred / n));
        gt.push_back(read_png_rgb(args.gt / n));
    }
    if (args.pred_vertices.has_value() != args.gt_vertices.has_value())
        throw ValidationError("vertex streams must be given for both pred and gt");
    std::optional<VertexStream> pv, gv;
    if (args.pred_vertices) {
        pv = load_vertex_stream(*args.pred_vertices);
        gv = load_vertex_stream(*args.gt_vertices);
    }
    const MetricsReport report = evaluate_sequence(pred, gt, pv ? &*pv : nullptr, gv ? &*gv : nullptr);
    nlohmann::json j = metrics_report_to_json(report);
    nlohmann::json names = nlohmann::json::array();
    for (const std::string& n : pred_names)
        names.push_back(n);
    j["frames"] = std::move(names);
    write_json(config.out / "metrics.json", j);
    return {{"report", j}, {"table", format_metrics_table(report)}};
}

nlohmann::json cmd_make_pairs(const MakePairsArgs& args, const PipelineConfig& config)
{
    config.validate();
    const BodyModel model = load_model(args.avatar);
    const PoseSequence poses = load_pose_sequence(args.poses);
    const Camera camera = load_camera(args.camera);
    std::vector<std::string> names;
    for (const std::string& n : list_png_names(args.video))
        if (n.starts_with("frame_"))
            names.push_back(n);
    if (names.size() != poses.size())
        throw ValidationError(args.video.string() + " has " + std::to_string(names.size()) + " frames but " +
                              args.poses.string() + " has " + std::to_string(poses.size()) + " poses");
    std::vector<RgbImage> frames;
    for (const std::string& n : names)
        frames.push_back(read_png_rgb(args.video / n));

    const std::vector<TrainingPair> pairs =
        make_training_pairs(model, frames, poses, camera, stage1_options(config), config.background);
    nlohmann::json list = nlohmann::json::array();
    for (const TrainingPair& p : pairs) {
        const std::string inter = numbered_name("inter_", p.frame_index + 1);
        const std::string target = numbered_name("target_", p.frame_index + 1);
        write_png(config.out / inter, p.intermediate);
        write_png(config.out / target, p.target);
        list.push_back({{"frame", p.frame_index},
                        {"intermediate", inter},
                        {"target", target},
                        {"source", names[static_cast<std::size_t>(p.frame_index)]}});
    }
    const nlohmann::json manifest = {{"count", pairs.size()}, {"pairs", std::move(list)}};
    write_json(config.out / "pairs.json", manifest);
    return {{"count", pairs.size()}, {"manifest", (config.out / "pairs.json").string()}};
}

nlohmann::json cmd_gen_corpus(const CorpusSpec& spec, const PipelineConfig& config)
{
    const nlohmann::json manifest = generate_corpus(spec, config.out);
    std::size_t files = 0;
    for (const nlohmann::json& a : manifest.at("avatars"))
        files += a.at("sha256").size();
    return {{"avatars", manifest.at("avatars").size()},
            {"files", files},
            {"manifest", (config.out / "manifest.json").string()}};
}

nlohmann::json cmd_orbit(const OrbitArgs& args, const PipelineConfig& config)
{
    config.validate();
    const BodyModel model = load_model(args.avatar);
    const PoseParams pose = args.pose ? load_pose_frame(*args.pose, args.frame) : PoseParams::identity(model.joint_count());
    std::optional<TextureMap> texture;
    if (args.texture)
        texture = prepare_render_texture(model, TextureMap(read_png_rgb(*args.texture)));

    const Intrinsics intrinsics = default_intrinsics(config.resolution, config.resolution);
    const std::vector<Vec3> joints = joint_positions(model, pose);
    const OrbitFraming framing = frame_subject(joints, intrinsics);
    const std::vector<Camera> cameras = orbit_cameras(framing.center, framing.radius, config.orbit.start_deg,
                                                      config.orbit.step_deg, config.orbit.count, intrinsics);
    const Mesh mesh = pose_mesh(model, pose);
    const TexelAtlasIndex index = build_atlas_index(model, config.texture_resolution);

    std::vector<VisibilityMask> masks;
    std::vector<RgbImage> colors;
    nlohmann::json azimuths = nlohmann::json::array();
    for (std::size_t k = 0; k < cameras.size(); ++k) {
        const FrameBuffers fb = rasterize(mesh, cameras[k], texture ? &*texture : nullptr, config.background);
        write_png(config.out / "frames" / numbered_name("frame_", static_cast<int>(k) + 1), fb.color);
        masks.push_back(compute_visibility_mask(model, pose, cameras[k], index, config.visibility));
        write_png(config.out / "masks" / numbered_name("mask_", static_cast<int>(k) + 1), masks.back().to_gray());
        if (args.contact_sheet)
            colors.push_back(fb.color);
        azimuths.push_back(config.orbit.start_deg + static_cast<double>(k) * config.orbit.step_deg);
    }
    save_cameras(config.out / "cameras.json", cameras);
    if (args.contact_sheet)
        write_png(config.out / "contact_sheet.png", contact_sheet(colors, config.background));
    const nlohmann::json summary = {{"count", cameras.size()},
                                    {"azimuths_deg", std::move(azimuths)},
                                    {"radius", framing.radius},
                                    {"center", {framing.center.x(), framing.center.y(), framing.center.z()}},
                                    {"union_coverage", union_coverage(masks, index)}};
    write_json(config.out / "orbit.json", summary);
    return summary;
}

void save_vertex_stream(const std::filesystem::path& path, const VertexStream& stream)
{
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& frame : stream) {
        nlohmann::json verts = nlohmann::json::array();
        for (const Vec3& v : frame)
            verts.push_back({v.x(), v.y(), v.z()});
        frames.push_back(std::move(verts));
    }
    write_text_atomic(path, nlohmann::json{{"frames", std::move(frames)}}.dump() + "\n");
}

VertexStream load_vertex_stream(const std::filesystem::path& path)
{
    try {
        const nlohmann::json j = nlohmann::json::parse(read_text(path));
        VertexStream stream;
        for (const nlohmann::json& frame : j.at("frames")) {
            std::vector<Vec3> verts;
            for (const nlohmann::json& v : frame) {
                const auto xyz = v.get<std::vector<double>>();
                if (xyz.size() != 3)
                    throw ValidationError("vertices must have 3 coordinates");
                verts.emplace_back(xyz[0], xyz[1], xyz[2]);
            }
            stream.push_back(std::move(verts));
        }
        return stream;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace mimic
