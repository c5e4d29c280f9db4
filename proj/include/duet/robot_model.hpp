#pragma once

#include <string>
#include <vector>

#include "duet/errors.hpp"
#include "duet/geometry.hpp"

namespace duet {

struct CapsuleSpec {
  Vec3 a = Vec3::Zero();  // segment endpoints, link frame
  Vec3 b = Vec3::Zero();
  double radius = 0.0;
};

struct LinkSpec {
  std::string name;
  std::vector<CapsuleSpec> capsules;
};

/// Revolute joint driving link (joint index + 1). Parent link precedes the
/// child in the link list, so a single forward pass composes the tree.
struct JointSpec {
  std::string name;
  int parent_link = 0;
  Vec3 origin_xyz = Vec3::Zero();
  Vec3 origin_rpy = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  double q_min = 0.0;
  double q_max = 0.0;
};

struct KeypointBinding {
  std::string name;
  int link = 0;
  Vec3 offset = Vec3::Zero();
};

struct RobotSpec {
  std::string name;
  std::vector<LinkSpec> links;    // links[0] is the floating base
  std::vector<JointSpec> joints;  // joints[j] drives links[j + 1]
  std::vector<KeypointBinding> keypoints;
  std::vector<int> key_links;   // links with orientation-tracking residuals
  std::vector<int> foot_links;  // links eligible for contact-stick rows
  VectorXd q_nom;               // nominal standing pose
  double nominal_root_height = 0.0;

  int dof() const { return static_cast<int>(joints.size()); }
  int link_count() const { return static_cast<int>(links.size()); }
  int link_index(const std::string& name) const;      // -1 when absent
  int keypoint_index(const std::string& name) const;  // -1 when absent

  /// Joints on the path from the base to the given link, root side first.
  const std::vector<int>& joint_chain(int link) const;

  /// Checks the structural invariants; throws ConfigError on violation and
  /// caches per-link joint chains on success. Must run before FK.
  void finalize();

 private:
  std::vector<std::vector<int>> chains_;
};

RobotSpec load_robot_spec(const std::string& path);
RobotSpec load_robot_spec_text(const std::string& json_text);

struct RobotConfiguration {
  VectorXd q;
  Vec3 root_pos = Vec3::Zero();
  Quat root_rot = Quat::Identity();
};

struct FkResult {
  std::vector<Transform> link_tf;
  std::vector<Vec3> keypoints;  // ordered as spec.keypoints
};

FkResult forward_kinematics(const RobotSpec& spec, const RobotConfiguration& cfg);

/// Column layout shared by all Jacobians: [root translation (3) |
/// root rotation (3, world left-increment) | joints (n)].
constexpr int kRootDims = 6;

/// 3 x (6 + n) Jacobian of a world point rigidly attached to a link.
MatrixXd point_jacobian(const RobotSpec& spec, const RobotConfiguration& cfg,
                        const FkResult& fk, int link, const Vec3& world_point);

/// Jacobian of the bound keypoint. Throws ConfigError on unknown ids.
MatrixXd keypoint_jacobian(const RobotSpec& spec, const RobotConfiguration& cfg,
                           const FkResult& fk, int keypoint);

struct OrientationError {
  Vec3 error;       // Log(target^T * current)
  MatrixXd jacobian;  // 3 x (6 + n)
};

OrientationError orientation_error_jacobian(const RobotSpec& spec, const RobotConfiguration& cfg,
                                            const FkResult& fk, int link, const Mat3& target);

/// Clamps q into the joint limits (idempotent).
void clamp_to_limits(const RobotSpec& spec, VectorXd& q);

/// Applies a stacked increment [dp, dtheta, dq]: p += dp, R <- Exp(dtheta) R.
RobotConfiguration apply_increment(const RobotSpec& spec, const RobotConfiguration& cfg,
                                   const VectorXd& delta);

}  // namespace duet
