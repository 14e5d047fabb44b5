#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mimic/body_model.hpp"
#include "mimic/motion.hpp"
#include "mimic/texture_style.hpp"

namespace mimic {

// Analytic joint-angle curves for the canonical humanoid at 30 fps:
// idle (rest pose), walk (30-frame gait cycle in place), wave (right hand,
// 20-frame cycle) and spin (one full turn of the root over the sequence).
PoseSequence motion_preset(const std::string& name, int frame_count = 30);
const std::vector<std::string>& motion_preset_names();

// Gait period of the walk preset, frames.
constexpr int kWalkPeriod = 30;

struct OrbitSpec {
    double start_deg = 0.0;
    double step_deg = 30.0;
    int count = 1;
};

struct CorpusSpec {
    int n_avatars = 10;
    std::vector<TextureStyle> styles;  // cycled over avatars; empty = sampled from the seed
    std::vector<std::string> motions{"walk"};
    int frames = 30;
    OrbitSpec views;
    int resolution = 256;          // rendered frame size, pixels
    int texture_resolution = 256;  // texels
    double shape_jitter = 0.05;    // relative, uniform per body dimension
    Rgb background{0, 0, 0};
    std::uint64_t seed = 0;

    void validate() const;
};

void to_json(nlohmann::json& j, const CorpusSpec& s);
void from_json(const nlohmann::json& j, CorpusSpec& s);  // rejects unknown keys

// Deterministic draws from a 64-bit seed (mt19937_64 with explicit
// integer-to-real mapping so results do not depend on the standard library).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);
    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi);  // inclusive

private:
    std::mt19937_64 engine_;
};

TextureStyle sample_style(SeededRng& rng);
AvatarConfig sample_avatar_config(SeededRng& rng, double jitter);

// Layout under out_dir:
//   manifest.json
//   avatar_XXX/avatar.json, style.json, texture.png, poses_<motion>.json
//   avatar_XXX/<motion>_view<deg>/camera.json, frame_000001.png ...
// Every path in the manifest is relative to out_dir.
nlohmann::json generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

nlohmann::json load_corpus_manifest(const std::filesystem::path& corpus_dir);

// Files that are missing, differ from their checksum, or exist on disk without
// being listed. Empty when the corpus is intact.
std::vector<std::string> verify_corpus(const std::filesystem::path& corpus_dir);

}  // namespace mimic
