#include "mimic/body_model.hpp"

#include <cmath>
#include <sstream>

#include "mimic/error.hpp"
#include "mimic/image_io.hpp"

namespace mimic {

Mat3 rodrigues(const Vec3& axis_angle)
{
    const double theta = axis_angle.norm();
    if (theta < 1e-12) {
        // First-order expansion keeps the map smooth through zero.
        Mat3 k;
        k << 0, -axis_angle.z(), axis_angle.y(), axis_angle.z(), 0, -axis_angle.x(), -axis_angle.y(),
            axis_angle.x(), 0;
        return Mat3::Identity() + k;
    }
    const Vec3 axis = axis_angle / theta;
    Mat3 k;
    k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return Mat3::Identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * k * k;
}

BodyModel::BodyModel(std::vector<Vec3> rest_vertices, MeshTopology topology, std::vector<Joint> skeleton,
                     std::vector<std::vector<SkinWeight>> skin_weights, std::vector<BodyPart> parts)
    : rest_vertices_(std::move(rest_vertices)),
      skeleton_(std::move(skeleton)),
      skin_weights_(std::move(skin_weights)),
      parts_(std::move(parts))
{
    const auto n_verts = static_cast<int>(rest_vertices_.size());
    const auto n_joints = static_cast<int>(skeleton_.size());
    if (n_joints == 0)
        throw ValidationError("body model: skeleton is empty");
    if (skeleton_[0].parent != -1)
        throw ValidationError("body model: joint 0 must be the root");
    for (int j = 1; j < n_joints; ++j) {
        // Parents precede children, which makes the parent graph a tree rooted at 0.
        const int p = skeleton_[static_cast<std::size_t>(j)].parent;
        if (p < 0 || p >= j)
            throw ValidationError("body model: joint " + std::to_string(j) + " has invalid parent " +
                                  std::to_string(p));
    }
    if (topology.face_uvs.size() != topology.faces.size())
        throw ValidationError("body model: one UV triple per face required");
    if (!topology.face_parts.empty() && topology.face_parts.size() != topology.faces.size())
        throw ValidationError("body model: face part list size mismatch");
    for (std::size_t f = 0; f < topology.faces.size(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const int v = topology.faces[f][static_cast<std::size_t>(c)];
            if (v < 0 || v >= n_verts)
                throw ValidationError("body model: face " + std::to_string(f) + " references vertex " +
                                      std::to_string(v));
            const Vec2& uv = topology.face_uvs[f][static_cast<std::size_t>(c)];
            if (!(uv.x() >= 0.0 && uv.x() <= 1.0 && uv.y() >= 0.0 && uv.y() <= 1.0))
                throw ValidationError("body model: face " + std::to_string(f) + " has UV outside [0,1]^2");
        }
        if (!topology.face_parts.empty()) {
            const int part = topology.face_parts[f];
            if (part < 0 || (!parts_.empty() && part >= static_cast<int>(parts_.size())))
                throw ValidationError("body model: face " + std::to_string(f) + " has invalid part");
        }
    }
    if (static_cast<int>(skin_weights_.size()) != n_verts)
        throw ValidationError("body model: one skin-weight list per vertex required");
    for (int v = 0; v < n_verts; ++v) {
        double sum = 0.0;
        for (const SkinWeight& w : skin_weights_[static_cast<std::size_t>(v)]) {
            if (w.joint < 0 || w.joint >= n_joints)
                throw ValidationError("body model: vertex " + std::to_string(v) + " weights unknown joint");
            if (!(w.weight >= 0.0))
                throw ValidationError("body model: vertex " + std::to_string(v) + " has a negative weight");
            sum += w.weight;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw ValidationError("body model: weights of vertex " + std::to_string(v) + " do not sum to 1");
    }
    topology_ = std::make_shared<const MeshTopology>(std::move(topology));

    rest_joints_.resize(skeleton_.size());
    rest_joints_[0] = skeleton_[0].offset;
    for (std::size_t j = 1; j < skeleton_.size(); ++j)
        rest_joints_[j] = rest_joints_[static_cast<std::size_t>(skeleton_[j].parent)] + skeleton_[j].offset;
}

int BodyModel::joint_index(const std::string& name) const
{
    for (std::size_t j = 0; j < skeleton_.size(); ++j)
        if (skeleton_[j].name == name)
            return static_cast<int>(j);
    return -1;
}

int BodyModel::part_index(const std::string& name) const
{
    for (std::size_t p = 0; p < parts_.size(); ++p)
        if (parts_[p].name == name)
            return static_cast<int>(p);
    return -1;
}

PoseParams PoseParams::identity(std::size_t joint_count)
{
    PoseParams pose;
    pose.joint_rotations.assign(joint_count, Vec3::Zero());
    return pose;
}

void PoseParams::validate() const
{
    for (std::size_t j = 0; j < joint_rotations.size(); ++j)
        if (!joint_rotations[j].allFinite())
            throw ValidationError("pose: joint " + std::to_string(j) + " rotation is not finite");
    if (!root_rotation.allFinite())
        throw ValidationError("pose: root rotation is not finite");
    if (!root_translation.allFinite())
        throw ValidationError("pose: root translation is not finite");
    if (!std::isfinite(scale) || scale <= 0.0)
        throw ValidationError("pose: scale must be positive and finite");
}

namespace {

void check_pose(const BodyModel& model, const PoseParams& pose)
{
    if (pose.joint_rotations.size() != model.joint_count())
        throw ValidationError("pose has " + std::to_string(pose.joint_rotations.size()) + " joint rotations, model has " +
                              std::to_string(model.joint_count()) + " joints");
    pose.validate();
}

}  // namespace

JointTransforms forward_kinematics(const BodyModel& model, const PoseParams& pose)
{
    check_pose(model, pose);
    const auto& skeleton = model.skeleton();
    JointTransforms out;
    out.rotations.resize(skeleton.size());
    out.positions.resize(skeleton.size());
    out.rotations[0] = rodrigues(pose.joint_rotations[0]);
    out.positions[0] = skeleton[0].offset;
    for (std::size_t j = 1; j < skeleton.size(); ++j) {
        const auto p = static_cast<std::size_t>(skeleton[j].parent);
        out.rotations[j] = out.rotations[p] * rodrigues(pose.joint_rotations[j]);
        out.positions[j] = out.positions[p] + out.rotations[p] * skeleton[j].offset;
    }
    return out;
}

std::vector<Vec3> joint_positions(const BodyModel& model, const PoseParams& pose)
{
    const JointTransforms fk = forward_kinematics(model, pose);
    const Mat3 global = pose.scale * rodrigues(pose.root_rotation);
    std::vector<Vec3> out(fk.positions.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = global * fk.positions[j] + pose.root_translation;
    return out;
}

Mesh pose_mesh(const BodyModel& model, const PoseParams& pose)
{
    const JointTransforms fk = forward_kinematics(model, pose);
    const auto& rest_joints = model.rest_joint_positions();
    const Mat3 global = pose.scale * rodrigues(pose.root_rotation);

    Mesh mesh;
    mesh.topology = model.shared_topology();
    mesh.vertices.resize(model.vertex_count());
    const auto& rest = model.rest_vertices();
    const auto& weights = model.skin_weights();
    for (std::size_t v = 0; v < rest.size(); ++v) {
        Vec3 skinned = Vec3::Zero();
        for (const SkinWeight& w : weights[v]) {
            const auto j = static_cast<std::size_t>(w.joint);
            skinned += w.weight * (fk.rotations[j] * (rest[v] - rest_joints[j]) + fk.positions[j]);
        }
        mesh.vertices[v] = global * skinned + pose.root_translation;
    }
    return mesh;
}

Vec3 face_normal(const std::vector<Vec3>& vertices, const Face& face)
{
    const Vec3& a = vertices[static_cast<std::size_t>(face[0])];
    const Vec3& b = vertices[static_cast<std::size_t>(face[1])];
    const Vec3& c = vertices[static_cast<std::size_t>(face[2])];
    return (b - a).cross(c - a);
}

void write_obj(const std::filesystem::path& path, const Mesh& mesh)
{
    std::ostringstream out;
    out.precision(9);
    out << "# mimic mesh: " << mesh.vertices.size() << " vertices, " << mesh.faces().size() << " faces\n";
    for (const Vec3& v : mesh.vertices)
        out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const FaceUv& uv : mesh.uv_coords())
        for (const Vec2& t : uv)
            out << "vt " << t.x() << ' ' << 1.0 - t.y() << '\n';
    std::size_t vt = 1;
    for (const Face& f : mesh.faces()) {
        out << 'f';
        for (int c = 0; c < 3; ++c)
            out << ' ' << f[static_cast<std::size_t>(c)] + 1 << '/' << vt++;
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

}  // namespace mimic
