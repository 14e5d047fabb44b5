// Command-line front end: mimic <subcommand> [options].
// Exit codes: 0 success, 2 invalid input, 3 I/O failure, 1 anything else.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mimic/commands.hpp"
#include "mimic/error.hpp"
#include "mimic/image_io.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> resolution;
    std::optional<int> clip_length;
    std::string background;
};

mimic::PipelineConfig resolve_config(const GlobalFlags& g)
{
    mimic::PipelineConfig c = g.config.empty() ? mimic::PipelineConfig{} : mimic::load_pipeline_config(g.config);
    if (g.seed)
        c.seed = *g.seed;
    if (!g.out.empty())
        c.out = g.out;
    if (g.resolution) {
        c.resolution = *g.resolution;
        c.texture_resolution = *g.resolution;
    }
    if (g.clip_length)
        c.clip_length = *g.clip_length;
    if (!g.background.empty())
        c.background = mimic::parse_color(g.background);
    c.validate();
    return c;
}

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::optional<std::filesystem::path> opt_path(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single-image human texture recovery and pose-driven re-rendering"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--config", g.config, "Pipeline config JSON (flags override it)");
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--resolution", g.resolution, "Texture and render resolution");
    app.add_option("--clip-length", g.clip_length, "Frames per clip");
    app.add_option("--background", g.background, "Background color R,G,B");

    std::string image, pose, camera, avatar, actor, cameras, partial, mask, pred, gt, pred_vertices, gt_vertices,
        video, texture, spec_file;
    int frame = 0;
    bool single_island = false, sheet = false;

    auto* extract = app.add_subcommand("extract", "Partial texture and visibility mask from one image");
    extract->add_option("--image", image, "Input RGB PNG")->required();
    extract->add_option("--pose", pose, "Pose-sequence JSON")->required();
    extract->add_option("--frame", frame, "Pose index shown in the image");
    extract->add_option("--camera", camera, "Camera JSON")->required();
    extract->add_option("--avatar", avatar, "Avatar config JSON");

    auto* inpaint = app.add_subcommand("inpaint", "Complete a partial texture");
    inpaint->add_option("--partial", partial, "Partial texture PNG")->required();
    inpaint->add_option("--mask", mask, "Visibility mask PNG")->required();
    inpaint->add_option("--avatar", avatar, "Avatar config JSON (atlas islands)");
    inpaint->add_flag("--single-island", single_island, "Treat the whole atlas as one island");

    auto* imitate = app.add_subcommand("imitate", "Drive the imitator with the actor's poses");
    imitate->add_option("--image", image, "Imitator RGB PNG")->required();
    imitate->add_option("--pose", pose, "Imitator pose-sequence JSON")->required();
    imitate->add_option("--frame", frame, "Pose index shown in the image");
    imitate->add_option("--camera", camera, "Imitator camera JSON")->required();
    imitate->add_option("--actor", actor, "Actor pose-sequence JSON")->required();
    imitate->add_option("--cameras", cameras, "Render camera(s) JSON; defaults to the imitator camera");
    imitate->add_option("--avatar", avatar, "Avatar config JSON");
    imitate->add_flag("--contact-sheet", sheet, "Also write contact_sheet.png");

    auto* evaluate = app.add_subcommand("evaluate", "Image and pose metrics between two frame directories");
    evaluate->add_option("--pred", pred, "Predicted frame directory")->required();
    evaluate->add_option("--gt", gt, "Ground-truth frame directory")->required();
    evaluate->add_option("--pred-vertices", pred_vertices, "Predicted vertex stream JSON");
    evaluate->add_option("--gt-vertices", gt_vertices, "Ground-truth vertex stream JSON");

    auto* pairs = app.add_subcommand("make-pairs", "Intermediate/target training pairs from a video");
    pairs->add_option("--video", video, "Directory of frame_XXXXXX.png")->required();
    pairs->add_option("--poses", pose, "Pose-sequence JSON")->required();
    pairs->add_option("--camera", camera, "Camera JSON")->required();
    pairs->add_option("--avatar", avatar, "Avatar config JSON");

    mimic::CorpusSpec spec;
    std::optional<int> n_avatars, n_frames, view_count;
    std::optional<double> view_start, view_step;
    std::vector<std::string> motions;
    auto* corpus = app.add_subcommand("gen-corpus", "Generate the synthetic corpus");
    corpus->add_option("--spec", spec_file, "Corpus spec JSON");
    corpus->add_option("--avatars", n_avatars, "Number of avatars");
    corpus->add_option("--motions", motions, "Motion presets (idle, walk, wave, spin)");
    corpus->add_option("--frames", n_frames, "Frames per motion");
    corpus->add_option("--view-start", view_start, "First view azimuth, degrees");
    corpus->add_option("--view-step", view_step, "View spacing, degrees");
    corpus->add_option("--views", view_count, "Views per motion");

    auto* orbit = app.add_subcommand("orbit", "Render and mask an orbit of views");
    orbit->add_option("--texture", texture, "Texture PNG (flat shading without)");
    orbit->add_option("--pose", pose, "Pose-sequence JSON (rest pose without)");
    orbit->add_option("--frame", frame, "Pose index");
    orbit->add_option("--avatar", avatar, "Avatar config JSON");
    orbit->add_flag("--contact-sheet", sheet, "Also write contact_sheet.png");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        const mimic::PipelineConfig config = resolve_config(g);
        nlohmann::json result;
        if (*extract) {
            result = mimic::cmd_extract({image, pose, frame, camera, opt_path(avatar)}, config);
        } else if (*inpaint) {
            result = mimic::cmd_inpaint({partial, mask, opt_path(avatar), single_island}, config);
        } else if (*imitate) {
            result = mimic::cmd_imitate(
                {image, pose, frame, camera, actor, opt_path(cameras), opt_path(avatar), sheet}, config);
        } else if (*evaluate) {
            result = mimic::cmd_evaluate({pred, gt, opt_path(pred_vertices), opt_path(gt_vertices)}, config);
            std::cout << result.at("table").get<std::string>();
            return 0;
        } else if (*pairs) {
            result = mimic::cmd_make_pairs({video, pose, camera, opt_path(avatar)}, config);
        } else if (*corpus) {
            if (!spec_file.empty()) {
                try {
                    spec = nlohmann::json::parse(mimic::read_text(spec_file)).get<mimic::CorpusSpec>();
                } catch (const nlohmann::json::exception& e) {
                    throw mimic::ValidationError(spec_file + ": " + e.what());
                }
            }
            if (n_avatars)
                spec.n_avatars = *n_avatars;
            if (!motions.empty())
                spec.motions = motions;
            if (n_frames)
                spec.frames = *n_frames;
            if (view_start)
                spec.views.start_deg = *view_start;
            if (view_step)
                spec.views.step_deg = *view_step;
            if (view_count)
                spec.views.count = *view_count;
            if (g.seed || !g.config.empty())
                spec.seed = config.seed;
            if (g.resolution)
                spec.resolution = spec.texture_resolution = *g.resolution;
            if (!g.background.empty())
                spec.background = config.background;
            result = mimic::cmd_gen_corpus(spec, config);
        } else if (*orbit) {
            result = mimic::cmd_orbit({opt_path(texture), opt_path(pose), frame, opt_path(avatar), sheet}, config);
        }
        std::cout << result.dump() << "\n";
        return 0;
    } catch (const mimic::ValidationError& e) {
        std::cerr << "mimic: error: " << one_line(e.what()) << "\n";
        return kExitValidation;
    } catch (const mimic::IoError& e) {
        std::cerr << "mimic: I/O error: " << one_line(e.what()) << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "mimic: I/O error: " << one_line(e.what()) << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "mimic: internal error: " << one_line(e.what()) << "\n";
        return 1;
    }
}
