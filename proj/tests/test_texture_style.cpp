#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "mimic/error.hpp"
#include "mimic/texture.hpp"
#include "mimic/texture_style.hpp"

using namespace mimic;

namespace {

struct TorsoBox {
    int left, top, right, bottom;  // inclusive texel bounds of the torso island's mapped texels
};

TorsoBox torso_box(const BodyModel& m, const TexelAtlasIndex& idx)
{
    TorsoBox b{idx.resolution, idx.resolution, -1, -1};
    const int torso = m.part_index("torso");
    for (std::size_t i = 0; i < idx.face.size(); ++i) {
        if (!idx.mapped(i) || m.topology().part_of(idx.face[i]) != torso)
            continue;
        const int c = static_cast<int>(i % static_cast<std::size_t>(idx.resolution));
        const int r = static_cast<int>(i / static_cast<std::size_t>(idx.resolution));
        b.left = std::min(b.left, c);
        b.right = std::max(b.right, c);
        b.top = std::min(b.top, r);
        b.bottom = std::max(b.bottom, r);
    }
    return b;
}

}  // namespace

TEST_CASE("solid style colors every torso texel with the shirt")
{
    const BodyModel m = build_canonical_humanoid();
    TextureStyle s;
    s.shirt = {0, 0, 255};
    const TextureMap tex = generate_procedural_texture(s, m, 128);
    const TexelAtlasIndex idx = build_atlas_index(m, 128);
    int n = 0;
    for (std::size_t i = 0; i < idx.face.size(); ++i)
        if (idx.mapped(i) && m.topology().part_of(idx.face[i]) == m.part_index("torso")) {
            REQUIRE(tex.at(static_cast<int>(i % 128), static_cast<int>(i / 128)) == Rgb{0, 0, 255});
            ++n;
        }
    CHECK(n > 100);
}

TEST_CASE("procedural textures are deterministic")
{
    const BodyModel m = build_canonical_humanoid();
    TextureStyle s;
    s.pattern = Pattern::checker;
    s.period = 6;
    CHECK(generate_procedural_texture(s, m, 64) == generate_procedural_texture(s, m, 64));
}

TEST_CASE("stripes with period 8 follow the stripe schedule from the island top")
{
    const BodyModel m = build_canonical_humanoid();
    TextureStyle s;
    s.pattern = Pattern::stripes;
    s.period = 8;
    s.shirt = {10, 20, 30};
    s.pattern_color = {240, 240, 240};
    const int res = 256;
    const TexelAtlasIndex idx = build_atlas_index(m, res);
    const TextureMap tex = generate_procedural_texture(s, m, res);
    const TorsoBox box = torso_box(m, idx);
    REQUIRE(box.bottom - box.top >= 16);
    // Rows 0-3 of the island are shirt, rows 4-7 are the stripe color, repeating.
    for (int r = box.top; r <= box.bottom; ++r) {
        const int rel = r - box.top;
        const Rgb expect = (rel % 8) < 4 ? s.shirt : s.pattern_color;
        for (int c = box.left; c <= box.right; ++c) {
            const std::size_t i = static_cast<std::size_t>(r * res + c);
            if (idx.mapped(i) && m.topology().part_of(idx.face[i]) == m.part_index("torso"))
                REQUIRE(tex.at(c, r) == expect);
        }
    }
}

TEST_CASE("pattern formulas")
{
    for (int row = 0; row < 16; ++row)
        for (int col = 0; col < 16; ++col) {
            CHECK_FALSE(pattern_texel(Pattern::none, 4, col, row));
            CHECK(pattern_texel(Pattern::stripes, 4, col, row) == (row % 4 >= 2));
            CHECK(pattern_texel(Pattern::checker, 4, col, row) == (((row / 2) + (col / 2)) % 2 == 1));
        }
}

TEST_CASE("arms carry sleeves near the shoulder and skin toward the hand")
{
    const BodyModel m = build_canonical_humanoid();
    TextureStyle s;
    s.sleeve_fraction = 0.5;
    const int res = 128;
    const TextureMap tex = generate_procedural_texture(s, m, res);
    const TexelAtlasIndex idx = build_atlas_index(m, res);
    std::set<Rgb> arm_colors, leg_colors;
    for (std::size_t i = 0; i < idx.face.size(); ++i) {
        if (!idx.mapped(i))
            continue;
        const std::string& part = m.parts()[static_cast<std::size_t>(m.topology().part_of(idx.face[i]))].name;
        const Rgb c = tex.at(static_cast<int>(i % res), static_cast<int>(i / res));
        if (part.find("arm") != std::string::npos)
            arm_colors.insert(c);
        else if (part.find("leg") != std::string::npos)
            leg_colors.insert(c);
    }
    CHECK(arm_colors == std::set<Rgb>{s.shirt, s.skin});
    CHECK(leg_colors == std::set<Rgb>{s.pants});
}

TEST_CASE("style validation and JSON")
{
    TextureStyle s;
    s.period = 1;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = {};
    s.sleeve_fraction = 1.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);

    s = {};
    s.pattern = Pattern::checker;
    s.period = 12;
    s.skin = {1, 2, 3};
    const nlohmann::json j = s;
    const TextureStyle back = j.get<TextureStyle>();
    CHECK(back.pattern == Pattern::checker);
    CHECK(back.period == 12);
    CHECK(back.skin == Rgb{1, 2, 3});

    nlohmann::json bad = j;
    bad["shirt"] = {300, 0, 0};
    CHECK_THROWS_AS(bad.get<TextureStyle>(), ValidationError);
    bad = j;
    bad["pattern"] = "plaid";
    CHECK_THROWS_AS(bad.get<TextureStyle>(), ValidationError);
    bad = j;
    bad["cape"] = true;
    CHECK_THROWS_AS(bad.get<TextureStyle>(), ValidationError);
    bad = j;
    bad["period"] = 1;
    CHECK_THROWS_AS(bad.get<TextureStyle>(), ValidationError);

    CHECK(pattern_from_name(pattern_name(Pattern::stripes)) == Pattern::stripes);
}
