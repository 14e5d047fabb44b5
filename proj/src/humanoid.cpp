#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "mimic/body_model.hpp"
#include "mimic/error.hpp"
#include "mimic/image_io.hpp"

namespace mimic {

namespace {

constexpr std::pair<const char*, double AvatarConfig::*> kLengthFields[] = {
    {"torso_length", &AvatarConfig::torso_length},
    {"torso_radius_x", &AvatarConfig::torso_radius_x},
    {"torso_radius_z", &AvatarConfig::torso_radius_z},
    {"neck_radius", &AvatarConfig::neck_radius},
    {"head_length", &AvatarConfig::head_length},
    {"head_radius", &AvatarConfig::head_radius},
    {"shoulder_width", &AvatarConfig::shoulder_width},
    {"upper_arm_length", &AvatarConfig::upper_arm_length},
    {"forearm_length", &AvatarConfig::forearm_length},
    {"hand_length", &AvatarConfig::hand_length},
    {"arm_radius", &AvatarConfig::arm_radius},
    {"wrist_radius", &AvatarConfig::wrist_radius},
    {"hip_width", &AvatarConfig::hip_width},
    {"thigh_length", &AvatarConfig::thigh_length},
    {"shin_length", &AvatarConfig::shin_length},
    {"foot_length", &AvatarConfig::foot_length},
    {"leg_radius", &AvatarConfig::leg_radius},
    {"ankle_radius", &AvatarConfig::ankle_radius},
};

constexpr std::pair<const char*, int AvatarConfig::*> kCountFields[] = {
    {"segments_per_bone", &AvatarConfig::segments_per_bone},
    {"limb_radial_segments", &AvatarConfig::limb_radial_segments},
    {"torso_radial_segments", &AvatarConfig::torso_radial_segments},
};

// Joint layout of the canonical skeleton.
enum JointId : int {
    kPelvis, kSpine, kChest, kNeck, kHead,
    kLeftCollar, kLeftShoulder, kLeftElbow, kLeftWrist,
    kRightCollar, kRightShoulder, kRightElbow, kRightWrist,
    kLeftHip, kLeftKnee, kLeftAnkle,
    kRightHip, kRightKnee, kRightAnkle,
    kJointCount
};

int mirror_joint(int j)
{
    if (j >= kLeftCollar && j <= kLeftWrist)
        return j + 4;
    if (j >= kRightCollar && j <= kRightWrist)
        return j - 4;
    if (j >= kLeftHip && j <= kLeftAnkle)
        return j + 3;
    if (j >= kRightHip && j <= kRightAnkle)
        return j - 3;
    return j;
}

struct ControlPoint {
    Vec3 position;
    double radius_side;
    double radius_front;
};

// One generalized-cylinder body part before it is appended to the model.
struct PartSpec {
    std::string name;
    std::vector<int> chain;
    double start_extension;
    double tip_extension;
    // Radii at [start, chain..., tip] (tip entry ignored when tip_extension == 0).
    std::vector<double> radius_side;
    std::vector<double> radius_front;
    Vec3 side_axis;
    Vec3 front_axis;
    int radial;
    UvRect island;
    bool flip_v;
};

struct Segment {
    ControlPoint a, b;
    int owner;
    int prev;
    int next;
    bool frozen_start;  // weights held at the s = 0 value of the first bone
    int steps;
};

struct Ring {
    Vec3 center;
    double radius_side;
    double radius_front;
    double arc;
    std::vector<SkinWeight> weights;
};

std::vector<SkinWeight> ring_weights(const Segment& seg, double s)
{
    std::vector<SkinWeight> w;
    auto add = [&](int joint, double weight) {
        if (weight > 0.0)
            w.push_back({joint, weight});
    };
    if (seg.frozen_start)
        s = 0.0;
    if (s < 0.5 && seg.prev >= 0) {
        add(seg.owner, 0.5 + s);
        add(seg.prev, 0.5 - s);
    } else if (s >= 0.5 && seg.next >= 0) {
        add(seg.owner, 1.5 - s);
        add(seg.next, s - 0.5);
    } else {
        add(seg.owner, 1.0);
    }
    return w;
}

class Builder {
public:
    Builder(const std::vector<Joint>& skeleton, const std::vector<Vec3>& rest_joints, int segments_per_bone)
        : skeleton_(skeleton), rest_joints_(rest_joints), segments_per_bone_(segments_per_bone)
    {
    }

    // Appends the part and returns the [first_vertex, first_face) offsets.
    std::pair<std::size_t, std::size_t> add_part(const PartSpec& spec, int part_index)
    {
        const std::size_t first_vertex = vertices.size();
        const std::size_t first_face = topology.faces.size();

        const std::vector<Ring> rings = build_rings(spec);
        const int n = spec.radial;
        const double arc_total = rings.back().arc;
        const double cap_band = std::min(0.035, 0.15 * (spec.island.v1 - spec.island.v0));
        const double body_v0 = spec.island.v0 + cap_band;
        const double body_v1 = spec.island.v1 - cap_band;
        auto v_of = [&](double arc) {
            const double t = arc / arc_total;
            return spec.flip_v ? body_v1 - (body_v1 - body_v0) * t : body_v0 + (body_v1 - body_v0) * t;
        };
        auto u_of = [&](int k) { return spec.island.u0 + (spec.island.u1 - spec.island.u0) * k / n; };

        for (const Ring& ring : rings) {
            for (int k = 0; k < n; ++k) {
                const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * k / n;
                vertices.push_back(ring.center + ring.radius_side * std::sin(phi) * spec.side_axis +
                                   ring.radius_front * std::cos(phi) * spec.front_axis);
                weights.push_back(ring.weights);
            }
        }
        auto vid = [&](std::size_t r, int k) { return static_cast<int>(first_vertex + r * n + (k % n)); };

        for (std::size_t r = 0; r + 1 < rings.size(); ++r) {
            const double va = v_of(rings[r].arc);
            const double vb = v_of(rings[r + 1].arc);
            for (int k = 0; k < n; ++k) {
                const Vec2 uv00(u_of(k), va), uv01(u_of(k + 1), va), uv10(u_of(k), vb), uv11(u_of(k + 1), vb);
                const Vec3 center = 0.5 * (rings[r].center + rings[r + 1].center);
                const Vec3 dir = (rings[r + 1].center - rings[r].center).normalized();
                add_face({vid(r, k), vid(r, k + 1), vid(r + 1, k + 1)}, {uv00, uv01, uv11}, part_index, center, dir);
                add_face({vid(r, k), vid(r + 1, k + 1), vid(r + 1, k)}, {uv00, uv11, uv10}, part_index, center, dir);
            }
        }

        // End caps: a domed fan around a center vertex.
        const Vec3 axis = (rings.back().center - rings.front().center).normalized();
        for (int end = 0; end < 2; ++end) {
            const Ring& ring = end == 0 ? rings.front() : rings.back();
            const std::size_t r = end == 0 ? 0 : rings.size() - 1;
            const double dome = 0.35 * std::min(ring.radius_side, ring.radius_front);
            const Vec3 outward = end == 0 ? Vec3(-axis) : axis;
            const int center_id = static_cast<int>(vertices.size());
            vertices.push_back(ring.center + dome * outward);
            weights.push_back(ring.weights);
            const double ring_v = v_of(ring.arc);
            const bool low_v = (end == 0) != spec.flip_v;
            const double tip_v = low_v ? spec.island.v0 : spec.island.v1;
            for (int k = 0; k < n; ++k) {
                const Vec2 uvc(0.5 * (u_of(k) + u_of(k + 1)), tip_v);
                add_face({center_id, vid(r, k), vid(r, k + 1)}, {uvc, Vec2(u_of(k), ring_v), Vec2(u_of(k + 1), ring_v)},
                         part_index, ring.center - outward, Vec3::Zero());
            }
        }
        return {first_vertex, first_face};
    }

    // Appends the x -> -x mirror of an already built part.
    void add_mirror(std::size_t first_vertex, std::size_t end_vertex, std::size_t first_face, std::size_t end_face,
                    int part_index)
    {
        const std::size_t offset = vertices.size() - first_vertex;
        for (std::size_t v = first_vertex; v < end_vertex; ++v) {
            Vec3 p = vertices[v];
            p.x() = -p.x();
            vertices.push_back(p);
            std::vector<SkinWeight> w = weights[v];
            for (SkinWeight& sw : w)
                sw.joint = mirror_joint(sw.joint);
            weights.push_back(std::move(w));
        }
        for (std::size_t f = first_face; f < end_face; ++f) {
            const Face& src = topology.faces[f];
            const FaceUv& uv = topology.face_uvs[f];
            auto mv = [&](int v) { return static_cast<int>(static_cast<std::size_t>(v) + offset); };
            auto mu = [](const Vec2& t) { return Vec2(1.0 - t.x(), t.y()); };
            // Reflection flips orientation; swap two corners to stay counter-clockwise.
            topology.faces.push_back({mv(src[0]), mv(src[2]), mv(src[1])});
            topology.face_uvs.push_back({mu(uv[0]), mu(uv[2]), mu(uv[1])});
            topology.face_parts.push_back(part_index);
        }
    }

    std::vector<Vec3> vertices;
    std::vector<std::vector<SkinWeight>> weights;
    MeshTopology topology;

private:
    std::vector<Ring> build_rings(const PartSpec& spec) const
    {
        const auto& chain = spec.chain;
        std::vector<ControlPoint> cps;
        const Vec3 first_dir = chain.size() > 1
                                   ? (rest_joints_[chain[1]] - rest_joints_[chain[0]]).normalized()
                                   : Vec3(0, 1, 0);
        const Vec3 last_dir = chain.size() > 1
                                  ? (rest_joints_[chain.back()] - rest_joints_[chain[chain.size() - 2]]).normalized()
                                  : first_dir;
        cps.push_back({rest_joints_[chain[0]] - spec.start_extension * first_dir, spec.radius_side[0],
                       spec.radius_front[0]});
        for (std::size_t i = 0; i < chain.size(); ++i)
            cps.push_back({rest_joints_[chain[i]], spec.radius_side[i + 1], spec.radius_front[i + 1]});
        if (spec.tip_extension > 0.0)
            cps.push_back({rest_joints_[chain.back()] + spec.tip_extension * last_dir, spec.radius_side.back(),
                           spec.radius_front.back()});

        const int root_parent = skeleton_[static_cast<std::size_t>(chain[0])].parent;
        std::vector<Segment> segments;
        segments.push_back({cps[0], cps[1], chain[0], root_parent, -1, true, 1});
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const int prev = i == 0 ? root_parent : chain[i - 1];
            segments.push_back({cps[i + 1], cps[i + 2], chain[i], prev, chain[i + 1], false, segments_per_bone_});
        }
        if (spec.tip_extension > 0.0) {
            const int prev = chain.size() > 1 ? chain[chain.size() - 2] : root_parent;
            segments.push_back({cps[cps.size() - 2], cps.back(), chain.back(), prev, -1, false, segments_per_bone_});
        }

        std::vector<Ring> rings;
        double arc = 0.0;
        for (std::size_t si = 0; si < segments.size(); ++si) {
            const Segment& seg = segments[si];
            const double length = (seg.b.position - seg.a.position).norm();
            for (int k = si == 0 ? 0 : 1; k <= seg.steps; ++k) {
                const double s = static_cast<double>(k) / seg.steps;
                Ring ring;
                ring.center = seg.a.position + s * (seg.b.position - seg.a.position);
                ring.radius_side = seg.a.radius_side + s * (seg.b.radius_side - seg.a.radius_side);
                ring.radius_front = seg.a.radius_front + s * (seg.b.radius_front - seg.a.radius_front);
                ring.arc = arc + s * length;
                ring.weights = ring_weights(seg, s);
                rings.push_back(std::move(ring));
            }
            arc += length;
        }
        return rings;
    }

    // Orients the face so its normal points away from `inside`; for side faces
    // only the component perpendicular to `axis` counts.
    void add_face(Face f, FaceUv uv, int part, const Vec3& inside, const Vec3& axis)
    {
        const Vec3 n = face_normal(vertices, f);
        const Vec3 centroid = (vertices[f[0]] + vertices[f[1]] + vertices[f[2]]) / 3.0;
        Vec3 outward = centroid - inside;
        outward -= outward.dot(axis) * axis;
        if (n.dot(outward) < 0.0) {
            std::swap(f[1], f[2]);
            std::swap(uv[1], uv[2]);
        }
        topology.faces.push_back(f);
        topology.face_uvs.push_back(uv);
        topology.face_parts.push_back(part);
    }

    const std::vector<Joint>& skeleton_;
    const std::vector<Vec3>& rest_joints_;
    int segments_per_bone_;
};

UvRect mirror_rect(const UvRect& r)
{
    return {1.0 - r.u1, r.v0, 1.0 - r.u0, r.v1};
}

}  // namespace

void AvatarConfig::validate() const
{
    for (const auto& [name, member] : kLengthFields) {
        const double v = this->*member;
        if (!std::isfinite(v) || v <= 0.0)
            throw ValidationError(std::string("avatar config: ") + name + " must be positive");
    }
    if (segments_per_bone < 1)
        throw ValidationError("avatar config: segments_per_bone must be >= 1");
    if (limb_radial_segments < 3 || torso_radial_segments < 3)
        throw ValidationError("avatar config: radial segment counts must be >= 3");
}

void to_json(nlohmann::json& j, const AvatarConfig& c)
{
    j = nlohmann::json::object();
    for (const auto& [name, member] : kLengthFields)
        j[name] = c.*member;
    for (const auto& [name, member] : kCountFields)
        j[name] = c.*member;
}

void from_json(const nlohmann::json& j, AvatarConfig& c)
{
    if (!j.is_object())
        throw ValidationError("avatar config: expected a JSON object");
    std::set<std::string> known;
    for (const auto& [name, member] : kLengthFields) {
        known.insert(name);
        if (j.contains(name)) {
            if (!j.at(name).is_number())
                throw ValidationError(std::string("avatar config: ") + name + " must be a number");
            c.*member = j.at(name).get<double>();
        }
    }
    for (const auto& [name, member] : kCountFields) {
        known.insert(name);
        if (j.contains(name)) {
            if (!j.at(name).is_number_integer())
                throw ValidationError(std::string("avatar config: ") + name + " must be an integer");
            c.*member = j.at(name).get<int>();
        }
    }
    for (const auto& item : j.items())
        if (!known.contains(item.key()))
            throw ValidationError("avatar config: unknown key '" + item.key() + "'");
}

AvatarConfig load_avatar_config(const std::filesystem::path& path)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("cannot parse " + path.string() + ": " + e.what());
    }
    AvatarConfig config = j.get<AvatarConfig>();
    config.validate();
    return config;
}

BodyModel build_canonical_humanoid(const AvatarConfig& c)
{
    c.validate();

    const double half_shoulder = 0.5 * c.shoulder_width;
    const double neck_rise = 0.41 * c.torso_length;
    std::vector<Joint> skeleton(kJointCount);
    auto set = [&](int id, const char* name, int parent, Vec3 offset) {
        skeleton[static_cast<std::size_t>(id)] = {name, parent, offset};
    };
    set(kPelvis, "pelvis", -1, Vec3::Zero());
    set(kSpine, "spine", kPelvis, {0, 0.22 * c.torso_length, 0});
    set(kChest, "chest", kSpine, {0, 0.37 * c.torso_length, 0});
    set(kNeck, "neck", kChest, {0, neck_rise, 0});
    set(kHead, "head", kNeck, {0, 0.38 * c.head_length, 0});
    const Vec3 collar(0.35 * half_shoulder, neck_rise - 0.06, 0);
    const Vec3 shoulder(0.65 * half_shoulder, 0, 0);
    set(kLeftCollar, "left_collar", kChest, collar);
    set(kLeftShoulder, "left_shoulder", kLeftCollar, shoulder);
    set(kLeftElbow, "left_elbow", kLeftShoulder, {c.upper_arm_length, 0, 0});
    set(kLeftWrist, "left_wrist", kLeftElbow, {c.forearm_length, 0, 0});
    const Vec3 mirror_x(-1, 1, 1);
    set(kRightCollar, "right_collar", kChest, collar.cwiseProduct(mirror_x));
    set(kRightShoulder, "right_shoulder", kRightCollar, shoulder.cwiseProduct(mirror_x));
    set(kRightElbow, "right_elbow", kRightShoulder, {-c.upper_arm_length, 0, 0});
    set(kRightWrist, "right_wrist", kRightElbow, {-c.forearm_length, 0, 0});
    set(kLeftHip, "left_hip", kPelvis, {0.5 * c.hip_width, -0.05, 0});
    set(kLeftKnee, "left_knee", kLeftHip, {0, -c.thigh_length, 0});
    set(kLeftAnkle, "left_ankle", kLeftKnee, {0, -c.shin_length, 0});
    set(kRightHip, "right_hip", kPelvis, {-0.5 * c.hip_width, -0.05, 0});
    set(kRightKnee, "right_knee", kRightHip, {0, -c.thigh_length, 0});
    set(kRightAnkle, "right_ankle", kRightKnee, {0, -c.shin_length, 0});

    std::vector<Vec3> rest_joints(skeleton.size());
    for (std::size_t j = 0; j < skeleton.size(); ++j)
        rest_joints[j] = (j == 0 ? Vec3::Zero() : rest_joints[static_cast<std::size_t>(skeleton[j].parent)]) +
                         skeleton[j].offset;

    const Vec3 x(1, 0, 0), y(0, 1, 0), z(0, 0, 1);
    const double rx = c.torso_radius_x, rz = c.torso_radius_z;
    const PartSpec torso{"torso", {kPelvis, kSpine, kChest, kNeck}, 0.10, 0.0,
                         {0.9 * rx, 0.95 * rx, 0.88 * rx, rx, 0.75 * rx, 0.75 * rx},
                         {0.9 * rz, rz, 0.92 * rz, rz, 0.8 * rz, 0.8 * rz},
                         x, z, c.torso_radial_segments, {0.27, 0.40, 0.73, 0.98}, true};
    const double hr = c.head_radius, nr = c.neck_radius;
    const PartSpec head{"head", {kNeck, kHead}, 0.02, 0.62 * c.head_length,
                        {nr, nr, hr, 0.85 * hr}, {nr, nr, 0.95 * hr, 0.8 * hr},
                        x, z, c.torso_radial_segments, {0.30, 0.02, 0.70, 0.37}, true};
    const double ar = c.arm_radius, wr = c.wrist_radius;
    const double arm_inset = std::max(0.02, half_shoulder - 0.7 * rx);
    const PartSpec left_arm{"left_arm", {kLeftShoulder, kLeftElbow, kLeftWrist}, arm_inset, c.hand_length,
                            {ar, ar, 0.85 * ar, wr, 0.9 * wr}, {ar, ar, 0.85 * ar, wr, 1.1 * wr},
                            y, z, c.limb_radial_segments, {0.02, 0.02, 0.24, 0.37}, false};
    const double lr = c.leg_radius, kr = c.ankle_radius;
    const PartSpec left_leg{"left_leg", {kLeftHip, kLeftKnee, kLeftAnkle}, 0.08, c.foot_length,
                            {lr, lr, 0.72 * lr, kr, 1.1 * kr}, {lr, lr, 0.72 * lr, kr, 1.2 * kr},
                            x, z, c.limb_radial_segments, {0.02, 0.40, 0.24, 0.98}, false};

    std::vector<BodyPart> parts = {
        {"torso", -1, torso.island},
        {"head", -1, head.island},
        {"left_arm", 3, left_arm.island},
        {"right_arm", 2, mirror_rect(left_arm.island)},
        {"left_leg", 5, left_leg.island},
        {"right_leg", 4, mirror_rect(left_leg.island)},
    };

    Builder builder(skeleton, rest_joints, c.segments_per_bone);
    builder.add_part(torso, 0);
    builder.add_part(head, 1);
    auto [arm_v, arm_f] = builder.add_part(left_arm, 2);
    const std::size_t arm_v_end = builder.vertices.size(), arm_f_end = builder.topology.faces.size();
    builder.add_mirror(arm_v, arm_v_end, arm_f, arm_f_end, 3);
    auto [leg_v, leg_f] = builder.add_part(left_leg, 4);
    const std::size_t leg_v_end = builder.vertices.size(), leg_f_end = builder.topology.faces.size();
    builder.add_mirror(leg_v, leg_v_end, leg_f, leg_f_end, 5);

    return BodyModel(std::move(builder.vertices), std::move(builder.topology), std::move(skeleton),
                     std::move(builder.weights), std::move(parts));
}

}  // namespace mimic
