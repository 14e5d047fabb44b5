#include "mimic/texture_style.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "mimic/error.hpp"
#include "mimic/texture.hpp"

namespace mimic {

void TextureStyle::validate() const
{
    if (period < 2)
        throw ValidationError("texture style: pattern period must be >= 2 texels, got " + std::to_string(period));
    if (!(sleeve_fraction >= 0.0 && sleeve_fraction <= 1.0))
        throw ValidationError("texture style: sleeve_fraction must lie in [0, 1]");
    if (!(hair_fraction >= 0.0 && hair_fraction <= 1.0))
        throw ValidationError("texture style: hair_fraction must lie in [0, 1]");
}

std::string pattern_name(Pattern p)
{
    switch (p) {
    case Pattern::stripes: return "stripes";
    case Pattern::checker: return "checker";
    case Pattern::none: break;
    }
    return "none";
}

Pattern pattern_from_name(const std::string& name)
{
    if (name == "none")
        return Pattern::none;
    if (name == "stripes")
        return Pattern::stripes;
    if (name == "checker")
        return Pattern::checker;
    throw ValidationError("texture style: unknown pattern '" + name + "' (expected none, stripes or checker)");
}

namespace {

nlohmann::json color_json(const Rgb& c)
{
    return nlohmann::json::array({c[0], c[1], c[2]});
}

Rgb color_from_json(const nlohmann::json& j, const char* key)
{
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(std::string("texture style: ") + key + " must be an array of 3 integers");
    Rgb c{};
    for (std::size_t k = 0; k < 3; ++k) {
        if (!j[k].is_number_integer() || j[k].get<long long>() < 0 || j[k].get<long long>() > 255)
            throw ValidationError(std::string("texture style: ") + key + " components must be integers in [0, 255]");
        c[k] = static_cast<std::uint8_t>(j[k].get<int>());
    }
    return c;
}

}  // namespace

void to_json(nlohmann::json& j, const TextureStyle& s)
{
    j = {{"skin", color_json(s.skin)},       {"hair", color_json(s.hair)},
         {"shirt", color_json(s.shirt)},     {"pants", color_json(s.pants)},
         {"pattern", pattern_name(s.pattern)}, {"period", s.period},
         {"pattern_color", color_json(s.pattern_color)}, {"sleeve_fraction", s.sleeve_fraction},
         {"hair_fraction", s.hair_fraction}};
}

void from_json(const nlohmann::json& j, TextureStyle& s)
{
    if (!j.is_object())
        throw ValidationError("texture style: expected a JSON object");
    static const std::set<std::string> known = {"skin",   "hair",          "shirt",           "pants",        "pattern",
                                                "period", "pattern_color", "sleeve_fraction", "hair_fraction"};
    for (const auto& item : j.items())
        if (!known.contains(item.key()))
            throw ValidationError("texture style: unknown key '" + item.key() + "'");
    try {
        if (j.contains("skin"))
            s.skin = color_from_json(j.at("skin"), "skin");
        if (j.contains("hair"))
            s.hair = color_from_json(j.at("hair"), "hair");
        if (j.contains("shirt"))
            s.shirt = color_from_json(j.at("shirt"), "shirt");
        if (j.contains("pants"))
            s.pants = color_from_json(j.at("pants"), "pants");
        if (j.contains("pattern_color"))
            s.pattern_color = color_from_json(j.at("pattern_color"), "pattern_color");
        if (j.contains("pattern"))
            s.pattern = pattern_from_name(j.at("pattern").get<std::string>());
        if (j.contains("period"))
            s.period = j.at("period").get<int>();
        if (j.contains("sleeve_fraction"))
            s.sleeve_fraction = j.at("sleeve_fraction").get<double>();
        if (j.contains("hair_fraction"))
            s.hair_fraction = j.at("hair_fraction").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("texture style: ") + e.what());
    }
    s.validate();
}

bool pattern_texel(Pattern pattern, int period, int col, int row)
{
    const int half = period / 2;
    switch (pattern) {
    case Pattern::stripes: return row % period >= half;
    case Pattern::checker: return (row / half + col / half) % 2 == 1;
    case Pattern::none: break;
    }
    return false;
}

TextureMap generate_procedural_texture(const TextureStyle& style, const BodyModel& model, int resolution)
{
    style.validate();
    const TexelAtlasIndex index = build_atlas_index(model, resolution);
    const MeshTopology& topology = model.topology();
    TextureMap texture(resolution);
    for (int row = 0; row < resolution; ++row) {
        for (int col = 0; col < resolution; ++col) {
            const std::size_t i = static_cast<std::size_t>(row) * resolution + col;
            if (!index.mapped(i))
                continue;
            const auto p = static_cast<std::size_t>(topology.part_of(index.face[i]));
            Rgb color = style.skin;
            if (p >= model.parts().size()) {
                texture.set(col, row, color);
                continue;
            }
            const BodyPart& part = model.parts()[p];
            const UvRect& r = part.island;
            const double t = ((row + 0.5) / resolution - r.v0) / (r.v1 - r.v0);
            if (part.name == "torso") {
                const int top = static_cast<int>(std::ceil(r.v0 * resolution - 0.5));
                const int left = static_cast<int>(std::ceil(r.u0 * resolution - 0.5));
                color = pattern_texel(style.pattern, style.period, col - left, row - top) ? style.pattern_color
                                                                                          : style.shirt;
            } else if (part.name == "head") {
                color = t < style.hair_fraction ? style.hair : style.skin;
            } else if (part.name == "left_arm" || part.name == "right_arm") {
                color = t < style.sleeve_fraction ? style.shirt : style.skin;
            } else if (part.name == "left_leg" || part.name == "right_leg") {
                color = style.pants;
            }
            texture.set(col, row, color);
        }
    }
    return pad_texture_gutters(texture, index);
}

}  // namespace mimic
