#include "mimic/texture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mimic/error.hpp"
#include "mimic/motion.hpp"

namespace mimic {

void check_texture_resolution(int resolution)
{
    if (resolution < kMinTextureResolution)
        throw ValidationError("texture resolution must be >= " + std::to_string(kMinTextureResolution) + ", got " +
                              std::to_string(resolution));
}

TextureMap::TextureMap(int resolution, Rgb fill)
{
    check_texture_resolution(resolution);
    texels_ = RgbImage(resolution, resolution, fill);
}

TextureMap::TextureMap(RgbImage texels) : texels_(std::move(texels))
{
    if (texels_.width() != texels_.height())
        throw ValidationError("texture map must be square, got " + std::to_string(texels_.width()) + "x" +
                              std::to_string(texels_.height()));
    check_texture_resolution(texels_.width());
}

VisibilityMask::VisibilityMask(int resolution, bool fill)
    : resolution_(resolution),
      bits_(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), fill ? 1 : 0)
{
    check_texture_resolution(resolution);
}

std::size_t VisibilityMask::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

GrayImage VisibilityMask::to_gray() const
{
    GrayImage image{resolution_, resolution_, {}};
    image.data.resize(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i)
        image.data[i] = bits_[i] ? 255 : 0;
    return image;
}

VisibilityMask VisibilityMask::from_gray(const GrayImage& image)
{
    if (image.width != image.height)
        throw ValidationError("visibility mask must be square");
    VisibilityMask mask(image.width);
    for (std::size_t i = 0; i < image.data.size(); ++i)
        mask.bits_[i] = image.data[i] != 0 ? 1 : 0;
    return mask;
}

std::size_t TexelAtlasIndex::mapped_count() const
{
    return static_cast<std::size_t>(std::count_if(face.begin(), face.end(), [](std::int32_t f) { return f >= 0; }));
}

double TexelAtlasIndex::mapped_fraction() const
{
    return face.empty() ? 0.0 : static_cast<double>(mapped_count()) / static_cast<double>(face.size());
}

TexelAtlasIndex build_atlas_index(const MeshTopology& topology, int resolution)
{
    check_texture_resolution(resolution);
    TexelAtlasIndex index;
    index.resolution = resolution;
    const std::size_t n = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    index.face.assign(n, -1);
    index.barycentric.assign(n, {0.0, 0.0, 0.0});

    // Texel centers exactly on an edge must count as inside for both neighbors;
    // the tolerance absorbs rounding in the edge functions.
    constexpr double kInsideTolerance = 1e-10;
    const double res = resolution;
    for (std::size_t f = 0; f < topology.faces.size(); ++f) {
        const FaceUv& uv = topology.face_uvs[f];
        const Vec2 a = uv[0] * res, b = uv[1] * res, c = uv[2] * res;
        const double area = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        if (std::abs(area) < 1e-14)
            continue;
        const int col0 = std::max(0, static_cast<int>(std::ceil(std::min({a.x(), b.x(), c.x()}) - 0.5)));
        const int col1 = std::min(resolution - 1, static_cast<int>(std::floor(std::max({a.x(), b.x(), c.x()}) - 0.5)));
        const int row0 = std::max(0, static_cast<int>(std::ceil(std::min({a.y(), b.y(), c.y()}) - 0.5)));
        const int row1 = std::min(resolution - 1, static_cast<int>(std::floor(std::max({a.y(), b.y(), c.y()}) - 0.5)));
        for (int row = row0; row <= row1; ++row) {
            const double py = row + 0.5;
            for (int col = col0; col <= col1; ++col) {
                const std::size_t i = static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution) +
                                      static_cast<std::size_t>(col);
                if (index.face[i] >= 0)
                    continue;  // lower face index already owns it
                const double px = col + 0.5;
                double w0 = ((b.x() - px) * (c.y() - py) - (b.y() - py) * (c.x() - px)) / area;
                double w1 = ((c.x() - px) * (a.y() - py) - (c.y() - py) * (a.x() - px)) / area;
                double w2 = ((a.x() - px) * (b.y() - py) - (a.y() - py) * (b.x() - px)) / area;
                if (w0 < -kInsideTolerance || w1 < -kInsideTolerance || w2 < -kInsideTolerance)
                    continue;
                w0 = std::max(w0, 0.0);
                w1 = std::max(w1, 0.0);
                w2 = std::max(w2, 0.0);
                const double sum = w0 + w1 + w2;
                index.face[i] = static_cast<std::int32_t>(f);
                index.barycentric[i] = {w0 / sum, w1 / sum, w2 / sum};
            }
        }
    }
    return index;
}

TexelAtlasIndex build_atlas_index(const BodyModel& model, int resolution)
{
    return build_atlas_index(model.topology(), resolution);
}

IslandMap IslandMap::from_atlas(const MeshTopology& topology, const TexelAtlasIndex& index)
{
    IslandMap map;
    map.resolution = index.resolution;
    map.labels.resize(index.face.size());
    for (std::size_t i = 0; i < index.face.size(); ++i)
        map.labels[i] = index.face[i] < 0 ? -1 : topology.part_of(index.face[i]);
    return map;
}

IslandMap IslandMap::single(int resolution)
{
    check_texture_resolution(resolution);
    return {resolution, std::vector<std::int32_t>(static_cast<std::size_t>(resolution) * resolution, 0)};
}

TextureMap pad_texture_gutters(const TextureMap& texture, const TexelAtlasIndex& index, int rings)
{
    const int res = texture.resolution();
    if (index.resolution != res)
        throw ValidationError("pad_texture_gutters: atlas index resolution differs from the texture");
    TextureMap out = texture;
    std::vector<std::uint8_t> filled(index.face.size());
    for (std::size_t i = 0; i < filled.size(); ++i)
        filled[i] = index.face[i] >= 0 ? 1 : 0;

    for (int ring = 0; ring < rings; ++ring) {
        std::vector<std::uint8_t> next = filled;
        TextureMap source = out;
        for (int row = 0; row < res; ++row) {
            for (int col = 0; col < res; ++col) {
                const std::size_t i = static_cast<std::size_t>(row) * res + col;
                if (filled[i])
                    continue;
                std::array<double, 3> sum{};
                int count = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int r = row + dy, c = col + dx;
                        if ((dx == 0 && dy == 0) || r < 0 || c < 0 || r >= res || c >= res)
                            continue;
                        if (!filled[static_cast<std::size_t>(r) * res + c])
                            continue;
                        const Rgb v = source.at(c, r);
                        for (int k = 0; k < 3; ++k)
                            sum[k] += v[k];
                        ++count;
                    }
                }
                if (count == 0)
                    continue;
                for (double& s : sum)
                    s /= count;
                out.set(col, row, to_rgb(sum));
                next[i] = 1;
            }
        }
        filled = std::move(next);
    }
    return out;
}

TextureMap prepare_render_texture(const BodyModel& model, const TextureMap& texture)
{
    return pad_texture_gutters(texture, build_atlas_index(model, texture.resolution()));
}

void VisibilityOptions::validate() const
{
    if (!(depth_tolerance >= 0.0) || !(sample_depth_tolerance >= 0.0))
        throw ValidationError("visibility options: tolerances must be non-negative");
    if (!(max_view_angle_deg > 0.0 && max_view_angle_deg <= 90.0))
        throw ValidationError("visibility options: max_view_angle_deg must lie in (0, 90]");
}

namespace {

struct TexelView {
    bool visible = false;
    double x = 0, y = 0;  // image position
    double depth = 0;
    int part = 0;
};

// Decides visibility of every mapped texel against one rasterized view.
std::vector<TexelView> observe_texels(const Mesh& mesh, const Camera& camera, const FrameBuffers& fb,
                                      const TexelAtlasIndex& index, const VisibilityOptions& options)
{
    const double min_cos = std::cos(options.max_view_angle_deg * std::numbers::pi / 180.0);
    const auto& faces = mesh.faces();
    const MeshTopology& topology = *mesh.topology;

    std::vector<Vec3> cam(mesh.vertices.size());
    for (std::size_t v = 0; v < cam.size(); ++v)
        cam[v] = camera.to_camera(mesh.vertices[v]);
    std::vector<Vec3> normals(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
        normals[f] = face_normal(cam, faces[f]);

    std::vector<TexelView> views(index.face.size());
    for (std::size_t i = 0; i < index.face.size(); ++i) {
        const std::int32_t f = index.face[i];
        if (f < 0)
            continue;
        const Face& face = faces[static_cast<std::size_t>(f)];
        const auto& b = index.barycentric[i];
        const Vec3 p = b[0] * cam[face[0]] + b[1] * cam[face[1]] + b[2] * cam[face[2]];
        if (p.z() <= kNearPlane)
            continue;
        const Vec3& n = normals[static_cast<std::size_t>(f)];
        const double n_norm = n.norm();
        if (n_norm == 0.0)
            continue;
        const double cos_view = -n.dot(p) / (n_norm * p.norm());
        if (cos_view <= min_cos)
            continue;
        const double x = camera.cx + camera.fx * p.x() / p.z();
        const double y = camera.cy + camera.fy * p.y() / p.z();
        if (!(x >= 0.0 && x < camera.width && y >= 0.0 && y < camera.height))
            continue;
        const std::int32_t g = fb.face_id[fb.index(static_cast<int>(x), static_cast<int>(y))];
        if (g < 0)
            continue;
        if (g != f) {
            // Depth of the rasterized surface along this texel's own ray.
            const Face& other = faces[static_cast<std::size_t>(g)];
            const Vec3& ng = normals[static_cast<std::size_t>(g)];
            const double denom = ng.dot(p);
            if (std::abs(denom) < 1e-15)
                continue;
            const double along = ng.dot(cam[other[0]]) / denom;
            if (p.z() > along * p.z() + options.depth_tolerance)
                continue;
        }
        TexelView& view = views[i];
        view.visible = true;
        view.x = x;
        view.y = y;
        view.depth = p.z();
        view.part = topology.part_of(f);
    }
    return views;
}

Rgb sample_masked(const RgbImage& image, const FrameBuffers& fb, const MeshTopology& topology, const TexelView& view,
                  double depth_tolerance)
{
    const double fx = view.x - 0.5, fy = view.y - 0.5;
    const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
    const double tx = fx - x0, ty = fy - y0;
    std::array<double, 3> sum{};
    double weight_sum = 0.0;
    for (int dy = 0; dy <= 1; ++dy) {
        for (int dx = 0; dx <= 1; ++dx) {
            const int x = x0 + dx, y = y0 + dy;
            if (x < 0 || y < 0 || x >= fb.width || y >= fb.height)
                continue;
            const std::size_t i = fb.index(x, y);
            const std::int32_t g = fb.face_id[i];
            if (g < 0 || topology.part_of(g) != view.part || std::abs(fb.depth[i] - view.depth) > depth_tolerance)
                continue;
            const double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty);
            if (w <= 0.0)
                continue;
            const Rgb c = image.at(x, y);
            for (int k = 0; k < 3; ++k)
                sum[k] += w * c[k];
            weight_sum += w;
        }
    }
    if (weight_sum < 1e-12)
        return image.at(static_cast<int>(view.x), static_cast<int>(view.y));
    for (double& s : sum)
        s /= weight_sum;
    return to_rgb(sum);
}

}  // namespace

PartialTexture extract_partial_texture(const RgbImage& image, const BodyModel& model, const PoseParams& pose,
                                       const Camera& camera, int resolution, const VisibilityOptions& options)
{
    return extract_partial_texture(image, model, pose, camera, build_atlas_index(model, resolution), options);
}

PartialTexture extract_partial_texture(const RgbImage& image, const BodyModel& model, const PoseParams& pose,
                                       const Camera& camera, const TexelAtlasIndex& index,
                                       const VisibilityOptions& options)
{
    options.validate();
    camera.validate();
    if (image.width() != camera.width || image.height() != camera.height)
        throw ValidationError("image is " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                              " but the camera expects " + std::to_string(camera.width) + "x" +
                              std::to_string(camera.height));
    const Mesh mesh = pose_mesh(model, pose);
    const FrameBuffers fb = rasterize(mesh, camera, nullptr);
    const std::vector<TexelView> views = observe_texels(mesh, camera, fb, index, options);

    PartialTexture out{TextureMap(index.resolution), VisibilityMask(index.resolution)};
    const int res = index.resolution;
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (!views[i].visible)
            continue;
        const int col = static_cast<int>(i % static_cast<std::size_t>(res));
        const int row = static_cast<int>(i / static_cast<std::size_t>(res));
        out.mask.set_index(i, true);
        out.texture.set(col, row, sample_masked(image, fb, model.topology(), views[i], options.sample_depth_tolerance));
    }
    return out;
}

VisibilityMask compute_visibility_mask(const BodyModel& model, const PoseParams& pose, const Camera& camera,
                                       int resolution, const VisibilityOptions& options)
{
    return compute_visibility_mask(model, pose, camera, build_atlas_index(model, resolution), options);
}

VisibilityMask compute_visibility_mask(const BodyModel& model, const PoseParams& pose, const Camera& camera,
                                       const TexelAtlasIndex& index, const VisibilityOptions& options)
{
    options.validate();
    camera.validate();
    const Mesh mesh = pose_mesh(model, pose);
    const FrameBuffers fb = rasterize(mesh, camera, nullptr);
    const std::vector<TexelView> views = observe_texels(mesh, camera, fb, index, options);
    VisibilityMask mask(index.resolution);
    for (std::size_t i = 0; i < views.size(); ++i)
        mask.set_index(i, views[i].visible);
    return mask;
}

Intrinsics default_intrinsics(int width, int height)
{
    return Intrinsics::from_fov(width, height, 40.0);
}

std::vector<Camera> orbit_mask_cameras(const BodyModel& model, const PoseParams& pose, int n_views,
                                       const Intrinsics& intrinsics)
{
    if (n_views < 1)
        throw ValidationError("sample_orbit_masks: n_views must be >= 1");
    const std::vector<Vec3> joints = joint_positions(model, pose);
    const OrbitFraming framing = frame_subject(joints, intrinsics);
    return orbit_cameras(framing.center, framing.radius, 0.0, 360.0 / n_views, n_views, intrinsics);
}

std::vector<VisibilityMask> sample_orbit_masks(const BodyModel& model, const PoseParams& pose, int n_views,
                                               int resolution, const VisibilityOptions& options)
{
    return sample_orbit_masks(model, pose, n_views, build_atlas_index(model, resolution), default_intrinsics(),
                              options);
}

std::vector<VisibilityMask> sample_orbit_masks(const BodyModel& model, const PoseParams& pose, int n_views,
                                               const TexelAtlasIndex& index, const Intrinsics& intrinsics,
                                               const VisibilityOptions& options)
{
    std::vector<VisibilityMask> masks;
    for (const Camera& camera : orbit_mask_cameras(model, pose, n_views, intrinsics))
        masks.push_back(compute_visibility_mask(model, pose, camera, index, options));
    return masks;
}

double union_coverage(std::span<const VisibilityMask> masks, const TexelAtlasIndex& index)
{
    const std::size_t mapped = index.mapped_count();
    if (mapped == 0)
        return 0.0;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < index.face.size(); ++i) {
        if (index.face[i] < 0)
            continue;
        for (const VisibilityMask& m : masks) {
            if (m.at_index(i)) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(mapped);
}

TextureMap make_training_partial(const TextureMap& full_texture, const VisibilityMask& mask)
{
    if (full_texture.resolution() != mask.resolution())
        throw ValidationError("make_training_partial: texture is " + std::to_string(full_texture.resolution()) +
                              " texels, mask is " + std::to_string(mask.resolution()));
    TextureMap out(full_texture.resolution());
    const int res = full_texture.resolution();
    for (int row = 0; row < res; ++row)
        for (int col = 0; col < res; ++col)
            if (mask.at(col, row))
                out.set(col, row, full_texture.at(col, row));
    return out;
}

}  // namespace mimic
