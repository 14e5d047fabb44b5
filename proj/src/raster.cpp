#include "mimic/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mimic/error.hpp"
#include "mimic/image_io.hpp"
#include "mimic/texture.hpp"

namespace mimic {

Intrinsics Intrinsics::from_fov(int width, int height, double vertical_fov_deg)
{
    if (width < 1 || height < 1)
        throw ValidationError("intrinsics: image size must be >= 1");
    if (!(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0))
        throw ValidationError("intrinsics: field of view must lie in (0, 180) degrees");
    const double f = 0.5 * height / std::tan(0.5 * vertical_fov_deg * std::numbers::pi / 180.0);
    return {f, f, 0.5 * width, 0.5 * height, width, height};
}

Camera::Camera(const Intrinsics& k, const Mat3& r, const Vec3& t)
    : fx(k.fx), fy(k.fy), cx(k.cx), cy(k.cy), rotation(r), translation(t), width(k.width), height(k.height)
{
    validate();
}

Camera Camera::look_at(const Intrinsics& k, const Vec3& eye, const Vec3& target)
{
    const Vec3 forward = (target - eye).normalized();
    Vec3 right = forward.cross(Vec3::UnitY());
    if (right.norm() < 1e-12)
        throw ValidationError("camera: view direction is parallel to the up axis");
    right.normalize();
    const Vec3 down = forward.cross(right);
    Mat3 r;
    r.row(0) = right.transpose();
    r.row(1) = down.transpose();
    r.row(2) = forward.transpose();
    return Camera(k, r, -r * eye);
}

void Camera::validate() const
{
    if (!(fx > 0.0 && fy > 0.0))
        throw ValidationError("camera: focal lengths must be positive");
    if (width < 1 || height < 1)
        throw ValidationError("camera: image size must be >= 1");
    if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height))
        throw ValidationError("camera: principal point outside the image");
    if (!rotation.allFinite() || !translation.allFinite())
        throw ValidationError("camera: extrinsics are not finite");
}

std::optional<Projection> project(const Camera& camera, const Vec3& point)
{
    const Vec3 p = camera.to_camera(point);
    if (p.z() <= kNearPlane)
        return std::nullopt;
    return Projection{camera.cx + camera.fx * p.x() / p.z(), camera.cy + camera.fy * p.y() / p.z(), p.z()};
}

std::array<double, 3> sample_texture(const TextureMap& texture, const Vec2& uv)
{
    const double res = texture.resolution();
    return sample_bilinear(texture.texels(), uv.x() * res, uv.y() * res);
}

namespace {

struct Screen {
    double x, y;
};

double raw_edge(const Screen& a, const Screen& b, double px, double py)
{
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// Evaluating a shared edge always from its lower vertex index makes the two
// adjacent triangles see exactly negated values, so no pixel falls between them.
double edge(const Screen& a, int ia, const Screen& b, int ib, double px, double py)
{
    return ia <= ib ? raw_edge(a, b, px, py) : -raw_edge(b, a, px, py);
}

}  // namespace

FrameBuffers rasterize(const Mesh& mesh, const Camera& camera, const TextureMap* texture, Rgb background)
{
    camera.validate();
    if (texture)
        check_texture_resolution(texture->resolution());

    FrameBuffers fb;
    fb.width = camera.width;
    fb.height = camera.height;
    const std::size_t n_pixels = static_cast<std::size_t>(fb.width) * static_cast<std::size_t>(fb.height);
    fb.color = RgbImage(fb.width, fb.height, background);
    fb.depth.assign(n_pixels, std::numeric_limits<double>::infinity());
    fb.face_id.assign(n_pixels, -1);
    fb.barycentric.assign(n_pixels, {0.0, 0.0, 0.0});

    std::vector<Vec3> cam_vertices(mesh.vertices.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        cam_vertices[v] = camera.to_camera(mesh.vertices[v]);

    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& face = faces[f];
        const Vec3& p0 = cam_vertices[static_cast<std::size_t>(face[0])];
        const Vec3& p1 = cam_vertices[static_cast<std::size_t>(face[1])];
        const Vec3& p2 = cam_vertices[static_cast<std::size_t>(face[2])];
        if (p0.z() <= kNearPlane || p1.z() <= kNearPlane || p2.z() <= kNearPlane)
            continue;
        if ((p1 - p0).cross(p2 - p0).dot(p0) >= 0.0)
            continue;  // back-facing or edge-on

        const std::array<Screen, 3> s = {
            Screen{camera.cx + camera.fx * p0.x() / p0.z(), camera.cy + camera.fy * p0.y() / p0.z()},
            Screen{camera.cx + camera.fx * p1.x() / p1.z(), camera.cy + camera.fy * p1.y() / p1.z()},
            Screen{camera.cx + camera.fx * p2.x() / p2.z(), camera.cy + camera.fy * p2.y() / p2.z()},
        };
        const double area = raw_edge(s[0], s[1], s[2].x, s[2].y);
        if (std::abs(area) < 1e-14)
            continue;
        const double inv_z[3] = {1.0 / p0.z(), 1.0 / p1.z(), 1.0 / p2.z()};

        const double min_x = std::min({s[0].x, s[1].x, s[2].x});
        const double max_x = std::max({s[0].x, s[1].x, s[2].x});
        const double min_y = std::min({s[0].y, s[1].y, s[2].y});
        const double max_y = std::max({s[0].y, s[1].y, s[2].y});
        const int x0 = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
        const int x1 = std::min(fb.width - 1, static_cast<int>(std::floor(max_x - 0.5)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
        const int y1 = std::min(fb.height - 1, static_cast<int>(std::floor(max_y - 0.5)));

        for (int y = y0; y <= y1; ++y) {
            const double py = y + 0.5;
            for (int x = x0; x <= x1; ++x) {
                const double px = x + 0.5;
                const double e0 = edge(s[1], face[1], s[2], face[2], px, py) / area;
                const double e1 = edge(s[2], face[2], s[0], face[0], px, py) / area;
                const double e2 = edge(s[0], face[0], s[1], face[1], px, py) / area;
                if (e0 < 0.0 || e1 < 0.0 || e2 < 0.0)
                    continue;
                const double q0 = e0 * inv_z[0], q1 = e1 * inv_z[1], q2 = e2 * inv_z[2];
                const double q = q0 + q1 + q2;
                const double z = 1.0 / q;
                const std::size_t i = fb.index(x, y);
                const double current = fb.depth[i];
                const bool closer = z < current - kDepthTieEpsilon;
                const bool tie_wins = !closer && std::abs(z - current) <= kDepthTieEpsilon &&
                                      static_cast<std::int32_t>(f) < fb.face_id[i];
                if (!closer && !tie_wins)
                    continue;
                fb.depth[i] = z;
                fb.face_id[i] = static_cast<std::int32_t>(f);
                fb.barycentric[i] = {q0 / q, q1 / q, q2 / q};
            }
        }
    }

    const auto& uvs = mesh.uv_coords();
    for (int y = 0; y < fb.height; ++y) {
        for (int x = 0; x < fb.width; ++x) {
            const std::size_t i = fb.index(x, y);
            const std::int32_t f = fb.face_id[i];
            if (f < 0)
                continue;
            const auto& b = fb.barycentric[i];
            if (texture) {
                const FaceUv& uv = uvs[static_cast<std::size_t>(f)];
                const Vec2 t = b[0] * uv[0] + b[1] * uv[1] + b[2] * uv[2];
                fb.color.set(x, y, to_rgb(sample_texture(*texture, t)));
            } else {
                const Face& face = faces[static_cast<std::size_t>(f)];
                const Vec3& p0 = cam_vertices[static_cast<std::size_t>(face[0])];
                const Vec3 n = (cam_vertices[static_cast<std::size_t>(face[1])] - p0)
                                   .cross(cam_vertices[static_cast<std::size_t>(face[2])] - p0)
                                   .normalized();
                const Vec3 centroid = (p0 + cam_vertices[static_cast<std::size_t>(face[1])] +
                                       cam_vertices[static_cast<std::size_t>(face[2])]) /
                                      3.0;
                const double shade = 0.25 + 0.75 * std::abs(n.dot(centroid.normalized()));
                const std::uint8_t g = to_u8(255.0 * shade);
                fb.color.set(x, y, {g, g, g});
            }
        }
    }
    return fb;
}

std::vector<FrameBuffers> render_turntable(const BodyModel& model, const PoseParams& pose, const TextureMap& texture,
                                           std::span<const Camera> cameras, Rgb background)
{
    if (cameras.empty())
        throw ValidationError("render_turntable: at least one camera is required");
    const TextureMap padded = prepare_render_texture(model, texture);
    const Mesh mesh = pose_mesh(model, pose);
    std::vector<FrameBuffers> frames;
    frames.reserve(cameras.size());
    for (const Camera& camera : cameras)
        frames.push_back(rasterize(mesh, camera, &padded, background));
    return frames;
}

void dump_frame_buffers(const std::filesystem::path& directory, const FrameBuffers& buffers)
{
    write_png(directory / "color.png", buffers.color);
    write_raw_f64(directory / "depth.f64", buffers.depth, buffers.height, buffers.width);
    write_raw_i32(directory / "face_id.i32", buffers.face_id, buffers.height, buffers.width);
}

}  // namespace mimic
