#include "duet/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "duet/errors.hpp"

namespace duet {

double KktResiduals::max() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktResiduals kkt_residuals(const QpProblem& p, const QpResult& r) {
  KktResiduals res;
  const VectorXd grad = p.H * r.x + p.g - p.A.transpose() * r.duals;
  res.stationarity = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
  if (p.constraint_count() > 0) {
    const VectorXd s = p.A * r.x - p.b;
    res.primal = std::max(0.0, (-s).maxCoeff());
    res.dual = std::max(0.0, (-r.duals).maxCoeff());
    res.complementarity = (r.duals.array() * s.array()).abs().maxCoeff();
  }
  return res;
}

namespace {

constexpr double kViolationTol = 1e-10;
constexpr double kDirectionTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

QpResult solve_qp(const QpProblem& p) {
  const int n = p.dims();
  const int m = p.constraint_count();
  if (p.g.size() != n || p.A.cols() != n || p.b.size() != m)
    throw SolverError("QP dimensions are inconsistent");
  if ((p.H - p.H.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw SolverError("QP Hessian is not symmetric");

  Eigen::LLT<MatrixXd> llt(p.H);
  if (llt.info() != Eigen::Success)
    throw SolverError("QP Hessian is not positive definite");

  QpResult res;
  res.x = llt.solve(-p.g);
  res.duals = VectorXd::Zero(m);
  if (m == 0) return res;

  std::vector<int> active;  // row indices, insertion order
  std::vector<double> u;    // multipliers of the active rows
  const int max_iter = 50 * (n + m) + 100;

  auto solve_directions = [&](const VectorXd& np, VectorXd& z, VectorXd& r_dual) {
    const VectorXd gi_np = llt.solve(np);
    const int q = static_cast<int>(active.size());
    if (q == 0) {
      z = gi_np;
      r_dual.resize(0);
      return;
    }
    MatrixXd N(n, q);
    for (int k = 0; k < q; ++k) N.col(k) = p.A.row(active[static_cast<std::size_t>(k)]).transpose();
    const MatrixXd gi_N = llt.solve(N);
    const MatrixXd S = N.transpose() * gi_N;
    r_dual = S.ldlt().solve(N.transpose() * gi_np);
    z = gi_np - gi_N * r_dual;
  };

  while (res.iterations < max_iter) {
    ++res.iterations;

    // most violated inactive constraint
    int pick = -1;
    double worst = -kViolationTol;
    for (int i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = p.A.row(i).dot(res.x) - p.b[i];
      if (s < worst) {
        worst = s;
        pick = i;
      }
    }
    if (pick < 0) break;  // primal feasible -> optimal

    const VectorXd np = p.A.row(pick).transpose();
    double u_pick = 0.0;
    double s_pick = worst;

    while (res.iterations < max_iter) {
      VectorXd z, r_dual;
      solve_directions(np, z, r_dual);
      const double zdotn = z.dot(np);

      // dual blocking step
      double t1 = kInf;
      int blocking = -1;
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (r_dual[static_cast<Eigen::Index>(k)] > kDirectionTol) {
          const double ratio = u[k] / r_dual[static_cast<Eigen::Index>(k)];
          if (ratio < t1) {
            t1 = ratio;
            blocking = static_cast<int>(k);
          }
        }
      }
      // full step to satisfy the picked constraint
      const double t2 = zdotn > kDirectionTol ? -s_pick / zdotn : kInf;
      const double t = std::min(t1, t2);

      if (t >= kInf) {
        res.status = QpStatus::Infeasible;  // constraint unreachable in the dual
        for (std::size_t k = 0; k < active.size(); ++k)
          res.duals[active[k]] = u[k];
        return res;
      }

      if (t2 >= kInf) {
        // step in dual space only; drop the blocking constraint
        for (std::size_t k = 0; k < active.size(); ++k) u[k] -= t * r_dual[static_cast<Eigen::Index>(k)];
        u_pick += t;
        active.erase(active.begin() + blocking);
        u.erase(u.begin() + blocking);
        ++res.iterations;
        continue;
      }

      res.x += t * z;
      for (std::size_t k = 0; k < active.size(); ++k) u[k] -= t * r_dual[static_cast<Eigen::Index>(k)];
      u_pick += t;
      s_pick = p.A.row(pick).dot(res.x) - p.b[pick];

      if (t == t2) {
        active.push_back(pick);
        u.push_back(u_pick);
        break;
      }
      // partial step: the blocking constraint leaves the active set
      active.erase(active.begin() + blocking);
      u.erase(u.begin() + blocking);
      ++res.iterations;
    }
  }

  for (std::size_t k = 0; k < active.size(); ++k) res.duals[active[k]] = u[k];
  if (res.iterations >= max_iter) res.status = QpStatus::IterationLimit;
  return res;
}

}  // namespace duet
