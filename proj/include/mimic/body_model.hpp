#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <nlohmann/json_fwd.hpp>

namespace mimic {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using Face = std::array<int, 3>;
using FaceUv = std::array<Vec2, 3>;

// Rotation matrix from an axis-angle vector (radians).
Mat3 rodrigues(const Vec3& axis_angle);

struct Joint {
    std::string name;
    int parent = -1;  // -1 only for joint 0
    Vec3 offset = Vec3::Zero();  // rest offset from the parent joint
};

struct SkinWeight {
    int joint = 0;
    double weight = 0.0;
};

// Axis-aligned rectangle in atlas space, [u0, u1] x [v0, v1].
struct UvRect {
    double u0 = 0, v0 = 0, u1 = 0, v1 = 0;
};

struct BodyPart {
    std::string name;
    int mirror = -1;  // index of the left/right counterpart, -1 if none
    UvRect island;
};

// Face connectivity and atlas coordinates. Shared between a BodyModel and
// every Mesh posed from it.
struct MeshTopology {
    std::vector<Face> faces;
    std::vector<FaceUv> face_uvs;  // per face corner, in [0,1]^2
    std::vector<int> face_parts;   // body part per face; empty means "all part 0"

    int part_of(int face) const { return face_parts.empty() ? 0 : face_parts[static_cast<std::size_t>(face)]; }
};

// Rest mesh + skeleton + skinning weights + UV atlas. Immutable after
// construction; the constructor validates every structural invariant.
class BodyModel {
public:
    BodyModel(std::vector<Vec3> rest_vertices, MeshTopology topology, std::vector<Joint> skeleton,
              std::vector<std::vector<SkinWeight>> skin_weights, std::vector<BodyPart> parts = {});

    const std::vector<Vec3>& rest_vertices() const { return rest_vertices_; }
    const std::vector<Face>& faces() const { return topology_->faces; }
    const std::vector<FaceUv>& uv_coords() const { return topology_->face_uvs; }
    const MeshTopology& topology() const { return *topology_; }
    const std::shared_ptr<const MeshTopology>& shared_topology() const { return topology_; }
    const std::vector<Joint>& skeleton() const { return skeleton_; }
    const std::vector<std::vector<SkinWeight>>& skin_weights() const { return skin_weights_; }
    const std::vector<BodyPart>& parts() const { return parts_; }

    std::size_t joint_count() const { return skeleton_.size(); }
    std::size_t vertex_count() const { return rest_vertices_.size(); }
    int joint_index(const std::string& name) const;  // -1 if absent
    int part_index(const std::string& name) const;   // -1 if absent

    // World-space rest position of every joint.
    const std::vector<Vec3>& rest_joint_positions() const { return rest_joints_; }

private:
    std::vector<Vec3> rest_vertices_;
    std::shared_ptr<const MeshTopology> topology_;
    std::vector<Joint> skeleton_;
    std::vector<std::vector<SkinWeight>> skin_weights_;
    std::vector<BodyPart> parts_;
    std::vector<Vec3> rest_joints_;
};

struct PoseParams {
    std::vector<Vec3> joint_rotations;  // axis-angle per joint, radians
    Vec3 root_rotation = Vec3::Zero();
    Vec3 root_translation = Vec3::Zero();
    double scale = 1.0;

    static PoseParams identity(std::size_t joint_count);
    // Throws ValidationError on non-finite values or non-positive scale.
    void validate() const;
};

struct Mesh {
    std::vector<Vec3> vertices;
    std::shared_ptr<const MeshTopology> topology;

    const std::vector<Face>& faces() const { return topology->faces; }
    const std::vector<FaceUv>& uv_coords() const { return topology->face_uvs; }
};

// Linear blend skinning followed by the global similarity transform:
// scale * R_root * LBS(v) + t.
Mesh pose_mesh(const BodyModel& model, const PoseParams& pose);

// Forward kinematics; joint 0 lands at root_translation.
std::vector<Vec3> joint_positions(const BodyModel& model, const PoseParams& pose);

// Per-joint world rotation and posed position before the global transform.
struct JointTransforms {
    std::vector<Mat3> rotations;
    std::vector<Vec3> positions;
};
JointTransforms forward_kinematics(const BodyModel& model, const PoseParams& pose);

Vec3 face_normal(const std::vector<Vec3>& vertices, const Face& face);  // unnormalized, CCW

void write_obj(const std::filesystem::path& path, const Mesh& mesh);

// Dimensions of the procedural humanoid, meters. Segment counts are rings per
// bone along each limb.
struct AvatarConfig {
    double torso_length = 0.54;
    double torso_radius_x = 0.16;
    double torso_radius_z = 0.11;
    double neck_radius = 0.055;
    double head_length = 0.26;
    double head_radius = 0.10;
    double shoulder_width = 0.40;
    double upper_arm_length = 0.27;
    double forearm_length = 0.25;
    double hand_length = 0.15;
    double arm_radius = 0.05;
    double wrist_radius = 0.035;
    double hip_width = 0.18;
    double thigh_length = 0.42;
    double shin_length = 0.40;
    double foot_length = 0.08;
    double leg_radius = 0.075;
    double ankle_radius = 0.045;
    int segments_per_bone = 4;
    int limb_radial_segments = 16;
    int torso_radial_segments = 24;

    void validate() const;
};

void to_json(nlohmann::json& j, const AvatarConfig& c);
void from_json(const nlohmann::json& j, AvatarConfig& c);  // rejects unknown keys
AvatarConfig load_avatar_config(const std::filesystem::path& path);

// Low-poly humanoid: head, torso, two arms, two legs as capped generalized
// cylinders in a T-pose, y up, facing +z, its left side toward +x.
BodyModel build_canonical_humanoid(const AvatarConfig& config = {});

}  // namespace mimic
