#pragma once

#include <utility>
#include <vector>

#include "duet/geometry.hpp"
#include "duet/robot_model.hpp"

namespace duet {

struct Capsule {
  Vec3 a = Vec3::Zero();  // world-frame segment endpoints
  Vec3 b = Vec3::Zero();
  double r = 0.0;
};

struct CapsuleWitness {
  double distance = 0.0;  // signed: segment distance minus radii sum
  Vec3 point_a = Vec3::Zero();  // axis points, not surface points
  Vec3 point_b = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // from b toward a
};

/// Closest points of two segments; s and t are the segment parameters in [0,1].
double closest_point_segments(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2,
                              double& s, double& t);

/// Signed capsule-capsule distance. Negative distance is the penetration
/// depth. Zero-length segments degrade to spheres.
CapsuleWitness capsule_distance(const Capsule& ca, const Capsule& cb);

Capsule capsule_to_world(const CapsuleSpec& spec, const Transform& link_tf);

/// Link-pair (a, b) with the owning agent of each side. agent values index
/// into the stacked configuration (0 or 1); self pairs repeat the agent.
struct CollisionPair {
  int agent_a = 0;
  int link_a = 0;
  int agent_b = 1;
  int link_b = 0;
};

/// All cross-robot link pairs (the default collision matrix).
std::vector<CollisionPair> inter_robot_pairs(const RobotSpec& spec1, const RobotSpec& spec2);

/// Within-robot pairs excluding a link with itself, its parent and children.
std::vector<CollisionPair> self_pairs(const RobotSpec& spec, int agent);

/// Minimum signed distance over the capsules of a link pair.
CapsuleWitness pair_distance(const RobotSpec& spec_a, const FkResult& fk_a, int link_a,
                             const RobotSpec& spec_b, const FkResult& fk_b, int link_b);

struct CollisionRow {
  Eigen::RowVectorXd normal_jacobian;  // over the stacked decision vector
  double lower = 0.0;                  // row * dx >= lower
  int pair_index = -1;
  double distance = 0.0;  // signed distance at the linearization point
};

struct CollisionRowParams {
  double eps_safe = 0.005;         // required clearance, meters
  double activation_margin = 0.10;  // emit rows only below this distance
  double recovery_cap = 0.04;       // per-step separation demand when violated
};

/// Linearized clearance rows: n^T (J_pa - J_pb) dx >= eps_safe - phi for every
/// pair closer than the activation margin. Lower bounds are capped by
/// recovery_cap so an already-violated pair asks for progress, not a jump.
std::vector<CollisionRow> collision_rows(const std::vector<const RobotSpec*>& specs,
                                         const std::vector<const RobotConfiguration*>& cfgs,
                                         const std::vector<const FkResult*>& fks,
                                         const std::vector<CollisionPair>& pairs,
                                         const CollisionRowParams& params);

/// Deepest inter-robot penetration (>= 0) over the given pairs.
double max_penetration(const std::vector<const RobotSpec*>& specs,
                       const std::vector<const FkResult*>& fks,
                       const std::vector<CollisionPair>& pairs);

}  // namespace duet
