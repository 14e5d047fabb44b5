#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mimic/body_model.hpp"
#include "mimic/image.hpp"
#include "mimic/texture_map.hpp"

namespace mimic {

struct Intrinsics {
    double fx = 0, fy = 0, cx = 0, cy = 0;
    int width = 0, height = 0;

    // Square pixels, principal point at the image center, given vertical field of view.
    static Intrinsics from_fov(int width, int height, double vertical_fov_deg);
};

// Pinhole camera. Camera space is x right, y down, z forward; p_cam = R p + t.
struct Camera {
    double fx = 0, fy = 0, cx = 0, cy = 0;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    int width = 0, height = 0;

    Camera() = default;
    Camera(const Intrinsics& k, const Mat3& rotation, const Vec3& translation);

    // Camera at `eye` looking at `target`, with world +y as up.
    static Camera look_at(const Intrinsics& k, const Vec3& eye, const Vec3& target);

    Vec3 center() const { return -rotation.transpose() * translation; }
    Vec3 to_camera(const Vec3& p) const { return rotation * p + translation; }
    void validate() const;

    bool operator==(const Camera&) const = default;
};

constexpr double kNearPlane = 1e-4;  // meters

struct Projection {
    double x, y, depth;
};

// std::nullopt when the point is at or behind the near plane.
std::optional<Projection> project(const Camera& camera, const Vec3& point);

struct FrameBuffers {
    int width = 0, height = 0;
    RgbImage color;
    std::vector<double> depth;           // +inf for background
    std::vector<std::int32_t> face_id;   // -1 for background
    std::vector<std::array<double, 3>> barycentric;

    std::size_t index(int x, int y) const
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
    bool foreground(int x, int y) const { return face_id[index(x, y)] >= 0; }

    bool operator==(const FrameBuffers&) const = default;
};

constexpr double kDepthTieEpsilon = 1e-9;

// Z-buffered rasterization with pixel-center sampling, back-face culling of
// clockwise faces and perspective-correct barycentrics. Triangles with any
// vertex behind the near plane are dropped. Without a texture, faces are
// flat-shaded by their normal.
FrameBuffers rasterize(const Mesh& mesh, const Camera& camera, const TextureMap* texture, Rgb background = {0, 0, 0});

// Texture lookup used by rasterize: bilinear, clamp-to-edge, texel centers at
// ((col + 0.5) / res, (row + 0.5) / res).
std::array<double, 3> sample_texture(const TextureMap& texture, const Vec2& uv);

// One rasterization of pose_mesh(model, pose) per camera, in order. The
// texture is gutter-padded against the model's atlas before rendering.
std::vector<FrameBuffers> render_turntable(const BodyModel& model, const PoseParams& pose, const TextureMap& texture,
                                           std::span<const Camera> cameras, Rgb background = {0, 0, 0});

// Debug dumps: depth.f64 / face_id.i32 with JSON sidecars, plus color.png.
void dump_frame_buffers(const std::filesystem::path& directory, const FrameBuffers& buffers);

}  // namespace mimic
