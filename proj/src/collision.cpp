#include "duet/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace duet {

double closest_point_segments(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2,
                              double& s, double& t) {
  constexpr double kEps = 1e-12;
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.dot(d1);
  const double e = d2.dot(d2);
  const double f = d2.dot(r);

  if (a <= kEps && e <= kEps) {
    s = t = 0.0;
  } else if (a <= kEps) {
    s = 0.0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      t = 0.0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

CapsuleWitness capsule_distance(const Capsule& ca, const Capsule& cb) {
  CapsuleWitness w;
  double s = 0.0, t = 0.0;
  const double axis_dist = closest_point_segments(ca.a, ca.b, cb.a, cb.b, s, t);
  w.point_a = ca.a + s * (ca.b - ca.a);
  w.point_b = cb.a + t * (cb.b - cb.a);
  w.distance = axis_dist - (ca.r + cb.r);
  if (axis_dist > 1e-12) {
    w.normal = (w.point_a - w.point_b) / axis_dist;
  } else {
    w.normal = Vec3::UnitZ();  // coincident axes: any separating direction works
  }
  return w;
}

Capsule capsule_to_world(const CapsuleSpec& spec, const Transform& link_tf) {
  return {link_tf * spec.a, link_tf * spec.b, spec.radius};
}

std::vector<CollisionPair> inter_robot_pairs(const RobotSpec& spec1, const RobotSpec& spec2) {
  std::vector<CollisionPair> pairs;
  for (int la = 0; la < spec1.link_count(); ++la) {
    if (spec1.links[static_cast<std::size_t>(la)].capsules.empty()) continue;
    for (int lb = 0; lb < spec2.link_count(); ++lb) {
      if (spec2.links[static_cast<std::size_t>(lb)].capsules.empty()) continue;
      pairs.push_back({0, la, 1, lb});
    }
  }
  return pairs;
}

std::vector<CollisionPair> self_pairs(const RobotSpec& spec, int agent) {
  // Pairs already overlapping in the nominal pose are structural (neighbors
  // through capsule-less intermediate links) and stay disabled.
  RobotConfiguration nominal;
  nominal.q = spec.q_nom;
  const FkResult fk_nom = forward_kinematics(spec, nominal);

  std::vector<CollisionPair> pairs;
  for (int la = 0; la < spec.link_count(); ++la) {
    if (spec.links[static_cast<std::size_t>(la)].capsules.empty()) continue;
    for (int lb = la + 1; lb < spec.link_count(); ++lb) {
      if (spec.links[static_cast<std::size_t>(lb)].capsules.empty()) continue;
      // skip directly connected links
      if (lb > 0 && spec.joints[static_cast<std::size_t>(lb - 1)].parent_link == la) continue;
      if (la > 0 && spec.joints[static_cast<std::size_t>(la - 1)].parent_link == lb) continue;
      if (pair_distance(spec, fk_nom, la, spec, fk_nom, lb).distance <= 0.0) continue;
      pairs.push_back({agent, la, agent, lb});
    }
  }
  return pairs;
}

CapsuleWitness pair_distance(const RobotSpec& spec_a, const FkResult& fk_a, int link_a,
                             const RobotSpec& spec_b, const FkResult& fk_b, int link_b) {
  CapsuleWitness best;
  best.distance = std::numeric_limits<double>::infinity();
  const Transform& ta = fk_a.link_tf[static_cast<std::size_t>(link_a)];
  const Transform& tb = fk_b.link_tf[static_cast<std::size_t>(link_b)];
  for (const CapsuleSpec& csa : spec_a.links[static_cast<std::size_t>(link_a)].capsules) {
    const Capsule wa = capsule_to_world(csa, ta);
    for (const CapsuleSpec& csb : spec_b.links[static_cast<std::size_t>(link_b)].capsules) {
      const CapsuleWitness w = capsule_distance(wa, capsule_to_world(csb, tb));
      if (w.distance < best.distance) best = w;
    }
  }
  return best;
}

std::vector<CollisionRow> collision_rows(const std::vector<const RobotSpec*>& specs,
                                         const std::vector<const RobotConfiguration*>& cfgs,
                                         const std::vector<const FkResult*>& fks,
                                         const std::vector<CollisionPair>& pairs,
                                         const CollisionRowParams& params) {
  // block offsets of each agent in the stacked decision vector
  std::vector<int> offset(specs.size(), 0);
  int dims = 0;
  for (std::size_t a = 0; a < specs.size(); ++a) {
    offset[a] = dims;
    dims += kRootDims + specs[a]->dof();
  }

  std::vector<CollisionRow> rows;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const CollisionPair& pair = pairs[p];
    const CapsuleWitness w = pair_distance(*specs[static_cast<std::size_t>(pair.agent_a)],
                                           *fks[static_cast<std::size_t>(pair.agent_a)], pair.link_a,
                                           *specs[static_cast<std::size_t>(pair.agent_b)],
                                           *fks[static_cast<std::size_t>(pair.agent_b)], pair.link_b);
    if (w.distance >= params.activation_margin) continue;

    const MatrixXd ja = point_jacobian(*specs[static_cast<std::size_t>(pair.agent_a)],
                                       *cfgs[static_cast<std::size_t>(pair.agent_a)],
                                       *fks[static_cast<std::size_t>(pair.agent_a)], pair.link_a, w.point_a);
    const MatrixXd jb = point_jacobian(*specs[static_cast<std::size_t>(pair.agent_b)],
                                       *cfgs[static_cast<std::size_t>(pair.agent_b)],
                                       *fks[static_cast<std::size_t>(pair.agent_b)], pair.link_b, w.point_b);

    CollisionRow row;
    row.normal_jacobian = Eigen::RowVectorXd::Zero(dims);
    row.normal_jacobian.segment(offset[static_cast<std::size_t>(pair.agent_a)],
                                ja.cols()) += w.normal.transpose() * ja;
    row.normal_jacobian.segment(offset[static_cast<std::size_t>(pair.agent_b)],
                                jb.cols()) -= w.normal.transpose() * jb;
    row.lower = std::min(params.eps_safe - w.distance, params.recovery_cap);
    row.pair_index = static_cast<int>(p);
    row.distance = w.distance;
    rows.push_back(std::move(row));
  }
  return rows;
}

double max_penetration(const std::vector<const RobotSpec*>& specs,
                       const std::vector<const FkResult*>& fks,
                       const std::vector<CollisionPair>& pairs) {
  double depth = 0.0;
  for (const CollisionPair& pair : pairs) {
    const CapsuleWitness w = pair_distance(*specs[static_cast<std::size_t>(pair.agent_a)],
                                           *fks[static_cast<std::size_t>(pair.agent_a)], pair.link_a,
                                           *specs[static_cast<std::size_t>(pair.agent_b)],
                                           *fks[static_cast<std::size_t>(pair.agent_b)], pair.link_b);
    depth = std::max(depth, -w.distance);
  }
  return depth;
}

}  // namespace duet
