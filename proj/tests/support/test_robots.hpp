// Small robots built in code for kinematics and solver tests.
#pragma once

#include <random>
#include <string>

#include "duet/robot_model.hpp"

namespace test_robots {

using duet::RobotSpec;
using duet::Vec3;

// Serial chain with cycling axes; keypoints kp0..kp<n> bound to every link,
// a capsule on each link past the base.
inline RobotSpec chain_robot(int joints, const std::string& name = "chain") {
  RobotSpec spec;
  spec.name = name;
  spec.nominal_root_height = 0.0;
  spec.links.push_back({"base", {{Vec3(0, 0, -0.05), Vec3(0, 0, 0.05), 0.04}}});
  const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (int j = 0; j < joints; ++j) {
    duet::JointSpec js;
    js.name = "j" + std::to_string(j);
    js.parent_link = j;  // pure chain
    js.origin_xyz = Vec3(0.15, 0.03 * ((j % 3) - 1), -0.05);
    js.origin_rpy = Vec3(0.1 * j, -0.05 * j, 0.2);
    js.axis = axes[j % 3];
    js.q_min = -2.0;
    js.q_max = 2.0;
    spec.joints.push_back(js);
    spec.links.push_back({"link" + std::to_string(j),
                          {{Vec3::Zero(), Vec3(0.12, 0, 0), 0.03}}});
  }
  for (int l = 0; l <= joints; ++l) {
    duet::KeypointBinding kp;
    kp.name = "kp" + std::to_string(l);
    kp.link = l;
    kp.offset = Vec3(0.05, 0.02, -0.01);
    spec.keypoints.push_back(kp);
  }
  spec.key_links = {joints};  // track the tip link orientation
  spec.q_nom = duet::VectorXd::Zero(joints);
  spec.finalize();
  return spec;
}

// Two revolute Z joints in the XY plane, links along +x; the classic arm.
inline RobotSpec planar_two_link(double l1, double l2) {
  RobotSpec spec;
  spec.name = "planar2";
  spec.links.push_back({"base", {}});
  duet::JointSpec j1;
  j1.name = "q1";
  j1.parent_link = 0;
  j1.axis = Vec3::UnitZ();
  j1.q_min = -3.0;
  j1.q_max = 3.0;
  spec.joints.push_back(j1);
  spec.links.push_back({"link1", {}});
  duet::JointSpec j2;
  j2.name = "q2";
  j2.parent_link = 1;
  j2.origin_xyz = Vec3(l1, 0, 0);
  j2.axis = Vec3::UnitZ();
  j2.q_min = -3.0;
  j2.q_max = 3.0;
  spec.joints.push_back(j2);
  spec.links.push_back({"link2", {}});
  duet::KeypointBinding tip;
  tip.name = "tip";
  tip.link = 2;
  tip.offset = Vec3(l2, 0, 0);
  spec.keypoints.push_back(tip);
  spec.q_nom = duet::VectorXd::Zero(2);
  spec.finalize();
  return spec;
}

inline duet::RobotConfiguration random_configuration(const RobotSpec& spec, std::mt19937& rng,
                                                     double q_scale = 0.8) {
  std::normal_distribution<double> normal(0.0, 1.0);
  duet::RobotConfiguration cfg;
  cfg.q = duet::VectorXd(spec.dof());
  for (int j = 0; j < spec.dof(); ++j)
    cfg.q[j] = std::clamp(q_scale * normal(rng), spec.joints[static_cast<std::size_t>(j)].q_min,
                          spec.joints[static_cast<std::size_t>(j)].q_max);
  cfg.root_pos = Vec3(normal(rng), normal(rng), normal(rng));
  cfg.root_rot = duet::Quat(normal(rng), normal(rng), normal(rng), normal(rng));
  if (cfg.root_rot.norm() < 1e-6) cfg.root_rot = duet::Quat::Identity();
  cfg.root_rot.normalize();
  return cfg;
}

}  // namespace test_robots
