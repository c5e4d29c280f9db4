// Independent reference implementations used to check the library. These
// deliberately avoid the library code paths they verify: FK composes raw 4x4
// matrices, segment distance enumerates stationary candidates, the QP oracle
// enumerates active sets.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "duet/geometry.hpp"
#include "duet/qp.hpp"
#include "duet/robot_model.hpp"

namespace oracles {

using duet::Mat3;
using duet::MatrixXd;
using duet::Vec3;
using duet::VectorXd;

// ---------------------------------------------------------------- finite diff

inline VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, int dim,
                            double step = 1e-6) {
  VectorXd g(dim);
  VectorXd x = VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = step;
    const double fp = f(x);
    x[i] = -step;
    const double fm = f(x);
    x[i] = 0.0;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

inline MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& f, int in_dim,
                            double step = 1e-6) {
  VectorXd x = VectorXd::Zero(in_dim);
  const VectorXd f0 = f(x);
  MatrixXd jac(f0.size(), in_dim);
  for (int i = 0; i < in_dim; ++i) {
    x[i] = step;
    const VectorXd fp = f(x);
    x[i] = -step;
    const VectorXd fm = f(x);
    x[i] = 0.0;
    jac.col(i) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

// ------------------------------------------------- homogeneous-transform FK

inline Eigen::Matrix4d hom_translation(const Vec3& t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 1>(0, 3) = t;
  return m;
}

inline Eigen::Matrix4d hom_rotation(const Mat3& r) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 3>(0, 0) = r;
  return m;
}

inline Eigen::Matrix4d hom_axis_rotation(int axis, double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  if (axis == 0) {
    m(1, 1) = c; m(1, 2) = -s; m(2, 1) = s; m(2, 2) = c;
  } else if (axis == 1) {
    m(0, 0) = c; m(0, 2) = s; m(2, 0) = -s; m(2, 2) = c;
  } else {
    m(0, 0) = c; m(0, 1) = -s; m(1, 0) = s; m(1, 1) = c;
  }
  return m;
}

inline Eigen::Matrix4d hom_angle_axis(const Vec3& axis, double rad) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  const Vec3 a = axis.normalized();
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  // Rodrigues, written out
  r << c + a.x() * a.x() * (1 - c), a.x() * a.y() * (1 - c) - a.z() * s,
      a.x() * a.z() * (1 - c) + a.y() * s, a.y() * a.x() * (1 - c) + a.z() * s,
      c + a.y() * a.y() * (1 - c), a.y() * a.z() * (1 - c) - a.x() * s,
      a.z() * a.x() * (1 - c) - a.y() * s, a.z() * a.y() * (1 - c) + a.x() * s,
      c + a.z() * a.z() * (1 - c);
  m.block<3, 3>(0, 0) = r;
  return m;
}

// World transforms of a robot chain composed with plain 4x4 products.
inline std::vector<Eigen::Matrix4d> robot_fk_oracle(const duet::RobotSpec& spec,
                                                    const duet::RobotConfiguration& cfg) {
  std::vector<Eigen::Matrix4d> world(spec.links.size());
  world[0] = hom_translation(cfg.root_pos) * hom_rotation(cfg.root_rot.toRotationMatrix());
  for (int j = 0; j < spec.dof(); ++j) {
    const duet::JointSpec& js = spec.joints[static_cast<std::size_t>(j)];
    Eigen::Matrix4d local = hom_translation(js.origin_xyz) *
                            hom_rotation(duet::rpy_to_matrix(js.origin_rpy)) *
                            hom_angle_axis(js.axis, cfg.q[j]);
    world[static_cast<std::size_t>(j + 1)] = world[static_cast<std::size_t>(js.parent_link)] * local;
  }
  return world;
}

// -------------------------------------------------------- segment distances

// Dense sampling (n x n) over both segments; ~1e-4 accurate for unit-scale
// segments at n = 100.
inline double segment_distance_sampled(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                                       const Vec3& q2, int n = 100) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const Vec3 a = p1 + (q1 - p1) * (static_cast<double>(i) / n);
    for (int j = 0; j <= n; ++j) {
      const Vec3 b = p2 + (q2 - p2) * (static_cast<double>(j) / n);
      best = std::min(best, (a - b).norm());
    }
  }
  return best;
}

// Exact: the minimum is attained at the unconstrained critical point or on a
// boundary edge; enumerate all candidates.
inline double segment_distance_exact(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                                     const Vec3& q2) {
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  auto dist = [&](double s, double t) { return ((p1 + s * d1) - (p2 + t * d2)).norm(); };
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };

  std::vector<std::pair<double, double>> candidates;
  const double a = d1.dot(d1), b = d1.dot(d2), e = d2.dot(d2);
  const double det = a * e - b * b;
  if (det > 1e-14) {
    const double c = d1.dot(r), f = d2.dot(r);
    candidates.emplace_back(clamp01((b * f - c * e) / det), clamp01((a * f - b * c) / det));
  }
  // each fixed edge: 1-D projection
  auto line_t = [&](const Vec3& point) { return e > 1e-14 ? clamp01((point - p2).dot(d2) / e) : 0.0; };
  auto line_s = [&](const Vec3& point) { return a > 1e-14 ? clamp01((point - p1).dot(d1) / a) : 0.0; };
  candidates.emplace_back(0.0, line_t(p1));
  candidates.emplace_back(1.0, line_t(q1));
  candidates.emplace_back(line_s(p2), 0.0);
  candidates.emplace_back(line_s(q2), 1.0);

  double best = std::numeric_limits<double>::infinity();
  for (auto [s, t] : candidates) best = std::min(best, dist(s, t));
  return best;
}

// ------------------------------------------------------------- QP oracles

struct QpOracleResult {
  bool found = false;
  VectorXd x;
  double objective = std::numeric_limits<double>::infinity();
};

// Enumerates every active subset, solves the equality KKT system and keeps
// the best primal/dual feasible candidate. Exponential; small m only.
inline QpOracleResult qp_enumeration_oracle(const duet::QpProblem& p, double tol = 1e-8) {
  const int n = p.dims();
  const int m = p.constraint_count();
  QpOracleResult best;

  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i)
      if (mask & (1L << i)) act.push_back(i);
    if (static_cast<int>(act.size()) > n) continue;

    const int k = static_cast<int>(act.size());
    MatrixXd kkt = MatrixXd::Zero(n + k, n + k);
    VectorXd rhs(n + k);
    kkt.topLeftCorner(n, n) = p.H;
    for (int i = 0; i < k; ++i) {
      kkt.block(0, n + i, n, 1) = -p.A.row(act[static_cast<std::size_t>(i)]).transpose();
      kkt.block(n + i, 0, 1, n) = p.A.row(act[static_cast<std::size_t>(i)]);
      rhs[n + i] = p.b[act[static_cast<std::size_t>(i)]];
    }
    rhs.head(n) = -p.g;

    Eigen::FullPivLU<MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const VectorXd sol = lu.solve(rhs);
    const VectorXd x = sol.head(n);
    const VectorXd lambda = sol.tail(k);

    if (k > 0 && lambda.minCoeff() < -tol) continue;
    bool feasible = true;
    for (int i = 0; i < m && feasible; ++i)
      if (p.A.row(i).dot(x) < p.b[i] - tol) feasible = false;
    if (!feasible) continue;

    const double obj = 0.5 * x.dot(p.H * x) + p.g.dot(x);
    if (obj < best.objective) {
      best.found = true;
      best.x = x;
      best.objective = obj;
    }
  }
  return best;
}

// --------------------------------------------------------------- randoms

inline MatrixXd random_spd(int n, std::mt19937& rng, double ridge = 0.5) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  return m * m.transpose() + ridge * MatrixXd::Identity(n, n);
}

inline VectorXd random_vector(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Vec3 random_vec3(std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  return Vec3(normal(rng), normal(rng), normal(rng));
}

// ------------------------------------------------------------ convolution

// Size-3 kernel with symmetric edge padding, written as the plain triple sum.
inline VectorXd convolve3_oracle(const VectorXd& x, double w1, double w0) {
  const Eigen::Index n = x.size();
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = x[std::max<Eigen::Index>(i - 1, 0)];
    const double right = x[std::min<Eigen::Index>(i + 1, n - 1)];
    out[i] = w1 * left + w0 * x[i] + w1 * right;
  }
  return out;
}

}  // namespace oracles
