#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mimic/body_model.hpp"
#include "mimic/image.hpp"
#include "mimic/raster.hpp"
#include "mimic/texture_map.hpp"

namespace mimic {

// Inverse of the surface parameterization: for each texel center inside a UV
// triangle, the face and barycentric coordinates of the surface point it shows.
struct TexelAtlasIndex {
    int resolution = 0;
    std::vector<std::int32_t> face;                // -1 = unmapped (gutter)
    std::vector<std::array<double, 3>> barycentric;

    bool mapped(std::size_t i) const { return face[i] >= 0; }
    std::size_t mapped_count() const;
    double mapped_fraction() const;
};

// Rasterizes the UV triangles at texel centers. A texel on an edge shared by
// several triangles goes to the lowest face index.
TexelAtlasIndex build_atlas_index(const MeshTopology& topology, int resolution);
TexelAtlasIndex build_atlas_index(const BodyModel& model, int resolution);

// Per-texel island label (body part), -1 for unmapped texels.
struct IslandMap {
    int resolution = 0;
    std::vector<std::int32_t> labels;

    static IslandMap from_atlas(const MeshTopology& topology, const TexelAtlasIndex& index);
    // Every texel mapped, one island.
    static IslandMap single(int resolution);
};

// Copies mapped texels and fills up to `rings` texels of gutter around each
// island with the mean of already-filled 8-neighbors. Gutter values depend on
// mapped texels only, so padding is idempotent.
TextureMap pad_texture_gutters(const TextureMap& texture, const TexelAtlasIndex& index, int rings = 2);

// Padding against the model's atlas at the texture's own resolution.
TextureMap prepare_render_texture(const BodyModel& model, const TextureMap& texture);

struct VisibilityOptions {
    double depth_tolerance = 1e-3;        // meters
    double max_view_angle_deg = 85.0;     // grazing-angle rejection
    double sample_depth_tolerance = 0.03; // meters; bilinear taps farther off are ignored

    void validate() const;
};

struct PartialTexture {
    TextureMap texture;
    VisibilityMask mask;
};

// A mapped texel is visible when its surface point projects inside the image
// onto a foreground pixel, is not hidden behind the surface rasterized there
// (tolerance depth_tolerance), and faces the camera within max_view_angle_deg.
// Visible texels take a bilinear sample of the image restricted to taps that
// show the same body part at a consistent depth; all other texels are zero.
PartialTexture extract_partial_texture(const RgbImage& image, const BodyModel& model, const PoseParams& pose,
                                       const Camera& camera, int resolution, const VisibilityOptions& options = {});
PartialTexture extract_partial_texture(const RgbImage& image, const BodyModel& model, const PoseParams& pose,
                                       const Camera& camera, const TexelAtlasIndex& index,
                                       const VisibilityOptions& options = {});

VisibilityMask compute_visibility_mask(const BodyModel& model, const PoseParams& pose, const Camera& camera,
                                       int resolution, const VisibilityOptions& options = {});
VisibilityMask compute_visibility_mask(const BodyModel& model, const PoseParams& pose, const Camera& camera,
                                       const TexelAtlasIndex& index, const VisibilityOptions& options = {});

// Cameras on a horizontal orbit (0 deg = in front of the subject, equal
// spacing over the full circle), auto-framed from the joint positions.
std::vector<Camera> orbit_mask_cameras(const BodyModel& model, const PoseParams& pose, int n_views,
                                       const Intrinsics& intrinsics);
std::vector<VisibilityMask> sample_orbit_masks(const BodyModel& model, const PoseParams& pose, int n_views,
                                               int resolution, const VisibilityOptions& options = {});
std::vector<VisibilityMask> sample_orbit_masks(const BodyModel& model, const PoseParams& pose, int n_views,
                                               const TexelAtlasIndex& index, const Intrinsics& intrinsics,
                                               const VisibilityOptions& options = {});

// Fraction of mapped texels set in the union of the masks.
double union_coverage(std::span<const VisibilityMask> masks, const TexelAtlasIndex& index);

// Ground-truth texture restricted to a mask (zero elsewhere).
TextureMap make_training_partial(const TextureMap& full_texture, const VisibilityMask& mask);

Intrinsics default_intrinsics(int width = 256, int height = 256);

}  // namespace mimic
