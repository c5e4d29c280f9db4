#include "duet/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace duet {

int RobotSpec::link_index(const std::string& n) const {
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i].name == n) return static_cast<int>(i);
  return -1;
}

int RobotSpec::keypoint_index(const std::string& n) const {
  for (std::size_t i = 0; i < keypoints.size(); ++i)
    if (keypoints[i].name == n) return static_cast<int>(i);
  return -1;
}

const std::vector<int>& RobotSpec::joint_chain(int link) const {
  return chains_.at(static_cast<std::size_t>(link));
}

void RobotSpec::finalize() {
  if (links.empty()) throw ConfigError("robot spec needs at least the base link");
  if (links.size() != joints.size() + 1)
    throw ConfigError("robot spec must have exactly one more link than joints");
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const JointSpec& js = joints[j];
    if (js.parent_link < 0 || js.parent_link > static_cast<int>(j))
      throw ConfigError("joint " + js.name + " parent must precede its child link");
    if (!(js.q_min < js.q_max)) throw ConfigError("joint " + js.name + " has empty limit range");
    if (std::abs(js.axis.norm() - 1.0) > 1e-9)
      throw ConfigError("joint " + js.name + " axis is not unit length");
  }
  for (const LinkSpec& l : links)
    for (const CapsuleSpec& c : l.capsules)
      if (!(c.radius > 0.0) || !c.a.allFinite() || !c.b.allFinite())
        throw ConfigError("link " + l.name + " has an invalid capsule");
  for (const KeypointBinding& kp : keypoints)
    if (kp.link < 0 || kp.link >= link_count())
      throw ConfigError("keypoint " + kp.name + " references a missing link");
  if (q_nom.size() == 0) q_nom = VectorXd::Zero(dof());
  if (q_nom.size() != dof()) throw ConfigError("q_nom length does not match joint count");

  chains_.assign(links.size(), {});
  for (int l = 1; l < link_count(); ++l) {
    int cursor = l;
    std::vector<int> chain;
    while (cursor > 0) {
      const int j = cursor - 1;
      chain.push_back(j);
      cursor = joints[static_cast<std::size_t>(j)].parent_link;
    }
    std::reverse(chain.begin(), chain.end());
    chains_[static_cast<std::size_t>(l)] = std::move(chain);
  }
}

namespace {

Vec3 get_vec3(const nlohmann::json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + ": missing '" + key + "'");
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 3) throw ConfigError(ctx + ": '" + key + "' must be a 3-array");
  return Vec3(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
}

}  // namespace

namespace {

RobotSpec robot_spec_from_json(const nlohmann::json& j, const std::string& source) {
  RobotSpec spec;
  try {
    if (j.value("schema", "") != "duet-robot")
      throw ConfigError("not a duet-robot file (schema field)");
    spec.name = j.value("name", "robot");
    spec.nominal_root_height = j.value("nominal_root_height", 0.0);

    for (const auto& lj : j.at("links")) {
      LinkSpec link;
      link.name = lj.at("name").get<std::string>();
      if (lj.contains("capsules")) {
        for (const auto& cj : lj.at("capsules")) {
          CapsuleSpec cap;
          cap.a = get_vec3(cj, "a", "link " + link.name);
          cap.b = get_vec3(cj, "b", "link " + link.name);
          cap.radius = cj.at("radius").get<double>();
          link.capsules.push_back(cap);
        }
      }
      spec.links.push_back(std::move(link));
    }

    for (const auto& jj : j.at("joints")) {
      JointSpec joint;
      joint.name = jj.at("name").get<std::string>();
      const std::string parent = jj.at("parent").get<std::string>();
      joint.parent_link = spec.link_index(parent);
      if (joint.parent_link < 0) throw ConfigError("joint " + joint.name + ": unknown parent link " + parent);
      const std::string child = jj.at("child").get<std::string>();
      const int child_index = spec.link_index(child);
      if (child_index != static_cast<int>(spec.joints.size()) + 1)
        throw ConfigError("joint " + joint.name + ": child link " + child +
                          " must be link index " + std::to_string(spec.joints.size() + 1));
      joint.origin_xyz = get_vec3(jj, "origin", "joint " + joint.name);
      if (jj.contains("rpy")) joint.origin_rpy = get_vec3(jj, "rpy", "joint " + joint.name);
      joint.axis = get_vec3(jj, "axis", "joint " + joint.name);
      const auto& lim = jj.at("limits");
      if (!lim.is_array() || lim.size() != 2) throw ConfigError("joint " + joint.name + ": limits must be [lo, hi]");
      joint.q_min = lim[0].get<double>();
      joint.q_max = lim[1].get<double>();
      spec.joints.push_back(std::move(joint));
    }

    for (const auto& kj : j.at("keypoints")) {
      KeypointBinding kp;
      kp.name = kj.at("name").get<std::string>();
      const std::string link = kj.at("link").get<std::string>();
      kp.link = spec.link_index(link);
      if (kp.link < 0) throw ConfigError("keypoint " + kp.name + ": unknown link " + link);
      if (kj.contains("offset")) kp.offset = get_vec3(kj, "offset", "keypoint " + kp.name);
      spec.keypoints.push_back(std::move(kp));
    }

    for (const auto& name : j.value("key_links", std::vector<std::string>{})) {
      const int l = spec.link_index(name);
      if (l < 0) throw ConfigError("key_links: unknown link " + name);
      spec.key_links.push_back(l);
    }
    for (const auto& name : j.value("foot_links", std::vector<std::string>{})) {
      const int l = spec.link_index(name);
      if (l < 0) throw ConfigError("foot_links: unknown link " + name);
      spec.foot_links.push_back(l);
    }

    if (j.contains("q_nom")) {
      const auto& qn = j.at("q_nom");
      spec.q_nom = VectorXd::Zero(static_cast<Eigen::Index>(qn.size()));
      for (std::size_t i = 0; i < qn.size(); ++i) spec.q_nom[static_cast<Eigen::Index>(i)] = qn[i].get<double>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("robot spec " + source + ": " + e.what());
  }

  spec.finalize();
  return spec;
}

}  // namespace

RobotSpec load_robot_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open robot spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("robot spec " + path + ": invalid JSON: " + e.what());
  }
  return robot_spec_from_json(j, path);
}

RobotSpec load_robot_spec_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("robot spec text: invalid JSON: ") + e.what());
  }
  return robot_spec_from_json(j, "(inline)");
}

FkResult forward_kinematics(const RobotSpec& spec, const RobotConfiguration& cfg) {
  if (cfg.q.size() != spec.dof()) throw ConfigError("configuration dimension does not match robot spec");

  FkResult fk;
  fk.link_tf.resize(spec.links.size());
  fk.link_tf[0] = make_transform(cfg.root_rot.toRotationMatrix(), cfg.root_pos);
  for (int jidx = 0; jidx < spec.dof(); ++jidx) {
    const JointSpec& joint = spec.joints[static_cast<std::size_t>(jidx)];
    Transform local = make_transform(rpy_to_matrix(joint.origin_rpy), joint.origin_xyz);
    local.linear() = local.linear() * Eigen::AngleAxisd(cfg.q[jidx], joint.axis).toRotationMatrix();
    fk.link_tf[static_cast<std::size_t>(jidx + 1)] =
        fk.link_tf[static_cast<std::size_t>(joint.parent_link)] * local;
  }

  fk.keypoints.reserve(spec.keypoints.size());
  for (const KeypointBinding& kp : spec.keypoints)
    fk.keypoints.push_back(fk.link_tf[static_cast<std::size_t>(kp.link)] * kp.offset);
  return fk;
}

namespace {

// World axis and origin of a joint at the current configuration. The joint's
// own rotation keeps its axis fixed, so the child frame supplies both.
inline void joint_axis_origin(const FkResult& fk, const JointSpec& joint, int jidx,
                              Vec3& axis_w, Vec3& origin_w) {
  const Transform& child = fk.link_tf[static_cast<std::size_t>(jidx + 1)];
  axis_w = child.linear() * joint.axis;
  origin_w = child.translation();
}

}  // namespace

MatrixXd point_jacobian(const RobotSpec& spec, const RobotConfiguration& cfg,
                        const FkResult& fk, int link, const Vec3& world_point) {
  (void)cfg;
  MatrixXd jac = MatrixXd::Zero(3, kRootDims + spec.dof());
  jac.block<3, 3>(0, 0) = Mat3::Identity();
  jac.block<3, 3>(0, 3) = -skew(world_point - fk.link_tf[0].translation());
  for (int jidx : spec.joint_chain(link)) {
    Vec3 axis_w, origin_w;
    joint_axis_origin(fk, spec.joints[static_cast<std::size_t>(jidx)], jidx, axis_w, origin_w);
    jac.col(kRootDims + jidx) = axis_w.cross(world_point - origin_w);
  }
  return jac;
}

MatrixXd keypoint_jacobian(const RobotSpec& spec, const RobotConfiguration& cfg,
                           const FkResult& fk, int keypoint) {
  if (keypoint < 0 || keypoint >= static_cast<int>(spec.keypoints.size()))
    throw ConfigError("unknown keypoint index " + std::to_string(keypoint));
  const KeypointBinding& kp = spec.keypoints[static_cast<std::size_t>(keypoint)];
  return point_jacobian(spec, cfg, fk, kp.link, fk.keypoints[static_cast<std::size_t>(keypoint)]);
}

OrientationError orientation_error_jacobian(const RobotSpec& spec, const RobotConfiguration& cfg,
                                            const FkResult& fk, int link, const Mat3& target) {
  (void)cfg;
  if (link < 0 || link >= spec.link_count())
    throw ConfigError("unknown link index " + std::to_string(link));

  OrientationError out;
  const Mat3 current = fk.link_tf[static_cast<std::size_t>(link)].linear();
  out.error = so3_log(target.transpose() * current);

  // A world left-increment Exp(d) on the link maps to d(error) = A * d.
  const Mat3 A = so3_left_jacobian_inverse(out.error) * target.transpose();
  out.jacobian = MatrixXd::Zero(3, kRootDims + spec.dof());
  out.jacobian.block<3, 3>(0, 3) = A;
  for (int jidx : spec.joint_chain(link)) {
    Vec3 axis_w, origin_w;
    joint_axis_origin(fk, spec.joints[static_cast<std::size_t>(jidx)], jidx, axis_w, origin_w);
    out.jacobian.col(kRootDims + jidx) = A * axis_w;
  }
  return out;
}

void clamp_to_limits(const RobotSpec& spec, VectorXd& q) {
  for (int j = 0; j < spec.dof(); ++j)
    q[j] = std::clamp(q[j], spec.joints[static_cast<std::size_t>(j)].q_min,
                      spec.joints[static_cast<std::size_t>(j)].q_max);
}

RobotConfiguration apply_increment(const RobotSpec& spec, const RobotConfiguration& cfg,
                                   const VectorXd& delta) {
  if (delta.size() != kRootDims + spec.dof()) throw ConfigError("increment dimension mismatch");
  RobotConfiguration out = cfg;
  out.root_pos += delta.segment<3>(0);
  out.root_rot = Quat(so3_exp(delta.segment<3>(3)) * cfg.root_rot.toRotationMatrix());
  out.root_rot.normalize();
  out.q += delta.tail(spec.dof());
  return out;
}

}  // namespace duet
