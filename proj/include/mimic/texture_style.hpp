#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mimic/body_model.hpp"
#include "mimic/texture_map.hpp"

namespace mimic {

enum class Pattern { none, stripes, checker };

// Clothing layout for a procedural avatar texture. The pattern is drawn on
// the torso island in texel units counted from the island's top-left texel.
struct TextureStyle {
    Rgb skin{224, 172, 138};
    Rgb hair{60, 40, 30};
    Rgb shirt{40, 80, 160};
    Rgb pants{50, 50, 60};
    Pattern pattern = Pattern::none;
    int period = 8;  // texels, >= 2
    Rgb pattern_color{230, 230, 230};
    double sleeve_fraction = 0.5;  // shirt-covered share of each arm, from the shoulder
    double hair_fraction = 0.35;   // hair-covered share of the head, from the crown

    void validate() const;
};

void to_json(nlohmann::json& j, const TextureStyle& s);
void from_json(const nlohmann::json& j, TextureStyle& s);  // rejects unknown keys

std::string pattern_name(Pattern p);
Pattern pattern_from_name(const std::string& name);

// True where the torso texel at island-relative (col, row) takes the pattern color.
bool pattern_texel(Pattern pattern, int period, int col, int row);

// Every mapped texel colored by its body part, then gutter-padded.
TextureMap generate_procedural_texture(const TextureStyle& style, const BodyModel& model, int resolution);

}  // namespace mimic
