#pragma once

// Reference implementations written independently of the library code paths
// they check. They favor directness over speed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "mimic/body_model.hpp"
#include "mimic/image.hpp"
#include "mimic/raster.hpp"
#include "mimic/texture_map.hpp"

namespace oracle {

using mimic::Mat3;
using mimic::Vec2;
using mimic::Vec3;

inline Mat3 axis_angle(const Vec3& r)
{
    const double angle = r.norm();
    if (angle == 0.0)
        return Mat3::Identity();
    return Eigen::AngleAxisd(angle, r / angle).toRotationMatrix();
}

struct Fk {
    std::vector<Mat3> world_rotation;
    std::vector<Vec3> world_position;  // before the global similarity
};

inline Fk fk_reference(const mimic::BodyModel& model, const mimic::PoseParams& pose)
{
    const auto& skeleton = model.skeleton();
    Fk fk;
    fk.world_rotation.resize(skeleton.size());
    fk.world_position.resize(skeleton.size());
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
        const int p = skeleton[j].parent;
        const Mat3 local = axis_angle(pose.joint_rotations[j]);
        if (p < 0) {
            fk.world_rotation[j] = local;
            fk.world_position[j] = skeleton[j].offset;
        } else {
            const auto pj = static_cast<std::size_t>(p);
            fk.world_rotation[j] = fk.world_rotation[pj] * local;
            fk.world_position[j] = fk.world_position[pj] + fk.world_rotation[pj] * skeleton[j].offset;
        }
    }
    return fk;
}

inline std::vector<Vec3> joints(const mimic::BodyModel& model, const mimic::PoseParams& pose)
{
    const Fk fk = fk_reference(model, pose);
    const Mat3 root = axis_angle(pose.root_rotation);
    std::vector<Vec3> out;
    for (const Vec3& p : fk.world_position)
        out.push_back(pose.scale * root * p + pose.root_translation);
    return out;
}

// Brute-force linear blend skinning: every vertex, every weight.
inline std::vector<Vec3> lbs(const mimic::BodyModel& model, const mimic::PoseParams& pose)
{
    const Fk fk = fk_reference(model, pose);
    const auto& rest_joints = model.rest_joint_positions();
    const Mat3 root = axis_angle(pose.root_rotation);
    std::vector<Vec3> out;
    for (std::size_t v = 0; v < model.vertex_count(); ++v) {
        Vec3 acc = Vec3::Zero();
        for (const mimic::SkinWeight& w : model.skin_weights()[v]) {
            const auto j = static_cast<std::size_t>(w.joint);
            acc += w.weight * (fk.world_rotation[j] * (model.rest_vertices()[v] - rest_joints[j]) + fk.world_position[j]);
        }
        out.push_back(pose.scale * root * acc + pose.root_translation);
    }
    return out;
}

// Bilinear lookup written from the texel-center definition.
inline std::array<double, 3> bilinear(const mimic::TextureMap& tex, const Vec2& uv)
{
    const int n = tex.resolution();
    const double x = uv.x() * n - 0.5, y = uv.y() * n - 0.5;
    const double fx = std::floor(x), fy = std::floor(y);
    const double ax = x - fx, ay = y - fy;
    auto clampi = [n](double c) { return static_cast<int>(std::min<double>(std::max<double>(c, 0.0), n - 1)); };
    const int x0 = clampi(fx), x1 = clampi(fx + 1), y0 = clampi(fy), y1 = clampi(fy + 1);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k)
        out[k] = (1 - ax) * (1 - ay) * tex.at(x0, y0)[k] + ax * (1 - ay) * tex.at(x1, y0)[k] +
                 (1 - ax) * ay * tex.at(x0, y1)[k] + ax * ay * tex.at(x1, y1)[k];
    return out;
}

// True when every bilinear tap that a lookup at `uv` gives nonzero weight is set in the mask.
inline bool taps_visible(const mimic::VisibilityMask& mask, const Vec2& uv)
{
    const int n = mask.resolution();
    const double x = uv.x() * n - 0.5, y = uv.y() * n - 0.5;
    const double fx = std::floor(x), fy = std::floor(y);
    const double ax = x - fx, ay = y - fy;
    auto clampi = [n](double c) { return static_cast<int>(std::min<double>(std::max<double>(c, 0.0), n - 1)); };
    for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
            const double w = (dx ? ax : 1 - ax) * (dy ? ay : 1 - ay);
            if (w > 0.0 && !mask.at(clampi(fx + dx), clampi(fy + dy)))
                return false;
        }
    return true;
}

// Mean absolute 8-bit difference over pixels whose UV lookup touches only
// visible texels. Returns {mae, pixel count}.
inline std::pair<double, std::size_t> visible_pixel_mae(const mimic::FrameBuffers& rendered, const mimic::RgbImage& reference,
                                                        const mimic::Mesh& mesh, const mimic::VisibilityMask& mask)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < rendered.height; ++y)
        for (int x = 0; x < rendered.width; ++x) {
            const std::size_t i = rendered.index(x, y);
            const std::int32_t f = rendered.face_id[i];
            if (f < 0)
                continue;
            const auto& uv = mesh.uv_coords()[static_cast<std::size_t>(f)];
            const auto& b = rendered.barycentric[i];
            if (!taps_visible(mask, b[0] * uv[0] + b[1] * uv[1] + b[2] * uv[2]))
                continue;
            const mimic::Rgb p = rendered.color.at(x, y), q = reference.at(x, y);
            for (int k = 0; k < 3; ++k)
                sum += std::abs(int(p[k]) - int(q[k]));
            ++n;
        }
    return {n ? sum / (3.0 * n) : 0.0, n};
}

// Depth along the pixel ray at which it meets triangle (a, b, c) given in
// camera space, or nullopt when the ray misses it or the face is back-facing.
// `margin` shrinks (positive) or grows (negative) the triangle in barycentric terms.
inline std::optional<double> ray_hit(const mimic::Camera& cam, double px, double py, const Vec3& a, const Vec3& b,
                                     const Vec3& c, double margin)
{
    const Vec3 n = (b - a).cross(c - a);
    if (n.dot(a) >= 0.0)
        return std::nullopt;
    if (a.z() <= mimic::kNearPlane || b.z() <= mimic::kNearPlane || c.z() <= mimic::kNearPlane)
        return std::nullopt;
    const Vec3 dir((px - cam.cx) / cam.fx, (py - cam.cy) / cam.fy, 1.0);
    // Moller-Trumbore.
    const Vec3 e1 = b - a, e2 = c - a;
    const Vec3 p = dir.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < 1e-300)
        return std::nullopt;
    const Vec3 s = -a;
    const double u = s.dot(p) / det;
    const Vec3 q = s.cross(e1);
    const double v = dir.dot(q) / det;
    const double t = e2.dot(q) / det;
    if (u < margin || v < margin || 1.0 - u - v < margin)
        return std::nullopt;
    return t;  // dir has unit z, so t is the depth
}

// Umeyama similarity (pred -> gt) through Eigen's implementation.
inline double pa_mpvpe(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt)
{
    Eigen::Matrix3Xd src(3, pred.size()), dst(3, gt.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        src.col(static_cast<Eigen::Index>(i)) = pred[i];
        dst.col(static_cast<Eigen::Index>(i)) = gt[i];
    }
    const Eigen::Matrix4d t = Eigen::umeyama(src, dst, true);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const Vec3 aligned = t.topLeftCorner<3, 3>() * pred[i] + t.topRightCorner<3, 1>();
        sum += (aligned - gt[i]).norm();
    }
    return 1000.0 * sum / static_cast<double>(pred.size());
}

// SSIM of two constant images a, b: the variance terms vanish.
inline double ssim_constant(double a, double b)
{
    const double c1 = std::pow(0.01 * 255.0, 2), c2 = std::pow(0.03 * 255.0, 2);
    return ((2 * a * b + c1) * c2) / ((a * a + b * b + c1) * c2);
}

}  // namespace oracle
