#pragma once

#include "duet/geometry.hpp"

namespace duet {

/// Convex QP:  min 0.5 x^T H x + g^T x  s.t.  A x >= b.
/// H must be symmetric positive definite; box bounds are passed as rows.
struct QpProblem {
  MatrixXd H;
  VectorXd g;
  MatrixXd A;  // m x n, may have zero rows
  VectorXd b;

  int dims() const { return static_cast<int>(H.rows()); }
  int constraint_count() const { return static_cast<int>(A.rows()); }
};

enum class QpStatus { Optimal = 0, Infeasible = 1, IterationLimit = 2 };

struct QpResult {
  VectorXd x;
  VectorXd duals;  // one multiplier per row, zero when inactive
  QpStatus status = QpStatus::Optimal;
  int iterations = 0;

  double objective(const QpProblem& p) const {
    return 0.5 * x.dot(p.H * x) + p.g.dot(x);
  }
};

struct KktResiduals {
  double stationarity = 0.0;   // ||Hx + g - A^T u||_inf
  double primal = 0.0;         // max constraint violation
  double dual = 0.0;           // max negative multiplier
  double complementarity = 0.0;  // max |u_i * s_i|

  double max() const;
};

KktResiduals kkt_residuals(const QpProblem& p, const QpResult& r);

/// Dense dual active-set solver (Goldfarb-Idnani). Starts from the
/// unconstrained minimizer and adds violated constraints until dual and
/// primal feasibility hold. Deterministic: constraint selection always picks
/// the most violated row, lowest index first. On infeasible problems the
/// best-effort iterate is returned with status Infeasible.
QpResult solve_qp(const QpProblem& p);

}  // namespace duet
