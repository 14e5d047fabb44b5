#pragma once

#include <memory>

#include <nlohmann/json_fwd.hpp>

#include "mimic/texture.hpp"
#include "mimic/texture_map.hpp"

namespace mimic {

struct InpaintOptions {
    bool mirror_prior = true;
    int max_iterations = 4000;
    double epsilon = 0.01;  // max per-texel change (8-bit units) that ends the fill

    void validate() const;
};

void to_json(nlohmann::json& j, const InpaintOptions& o);
void from_json(const nlohmann::json& j, InpaintOptions& o);  // rejects unknown keys

// Completes a partial texture map. Implementations must keep visible texels
// and unmapped texels (island label -1) unchanged.
class TextureInpainter {
public:
    virtual ~TextureInpainter() = default;
    virtual TextureMap inpaint(const TextureMap& partial, const VisibilityMask& mask, const IslandMap& islands) const = 0;
};

// Mirror-prior seeding (u -> 1-u) followed by a Jacobi harmonic fill within
// each island. Islands with no known texel take the mean visible color.
class HarmonicInpainter final : public TextureInpainter {
public:
    explicit HarmonicInpainter(InpaintOptions options = {});
    TextureMap inpaint(const TextureMap& partial, const VisibilityMask& mask, const IslandMap& islands) const override;

private:
    InpaintOptions options_;
};

TextureMap inpaint_texture(const TextureMap& partial, const VisibilityMask& mask, const IslandMap& islands,
                           const InpaintOptions& options = {});

}  // namespace mimic
