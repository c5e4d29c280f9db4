#pragma once

#include <array>

#include "duet/geometry.hpp"

namespace duet {

/// Error-aware adaptive sampling over motion bins. The three error channels
/// are terminal failures, tracking error and interaction error, smoothed per
/// bin; the curriculum weights shift with the moving-average episode length.
struct CurriculumState {
  static constexpr int kChannels = 3;  // [fail, track, inter]

  MatrixXd errors;  // kChannels x S, smoothed, non-negative
  double lbar_max = 0.0;
  double eta = 0.05;
  Vec3 alpha_init = Vec3(0.8, 0.1, 0.1);
  Vec3 alpha_target = Vec3(0.05, 0.30, 0.65);
  double phase_lo = 350.0;  // below: stability phase
  double phase_hi = 500.0;  // at or above: precision phase

  int bins() const { return static_cast<int>(errors.cols()); }
  void validate() const;
};

/// Size-3 Gaussian smoothing (sigma = 1 bin) with symmetric boundary
/// padding; preserves non-negativity and total mass.
VectorXd smooth_errors(const VectorXd& raw);

/// Piecewise-linear curriculum weights at the given episode length.
Vec3 curriculum_alpha(double lbar_max, const CurriculumState& state);

/// P(s) = eta/S + (1 - eta) * sum_k alpha_k * e_k(s) / sum_j e_k(j).
/// Channels with zero total mass contribute uniformly.
VectorXd sampling_distribution(const CurriculumState& state);

}  // namespace duet
