#include "duet/curriculum.hpp"

#include <cmath>

#include "duet/errors.hpp"

namespace duet {

void CurriculumState::validate() const {
  if (errors.rows() != kChannels) throw ConfigError("curriculum errors must have 3 channels");
  if (errors.cols() < 1) throw ConfigError("curriculum needs at least one bin");
  if ((errors.array() < 0.0).any()) throw ConfigError("curriculum errors must be non-negative");
  if (eta < 0.0 || eta > 1.0) throw ConfigError("eta must lie in [0, 1]");
  if (std::abs(alpha_init.sum() - 1.0) > 1e-12 || std::abs(alpha_target.sum() - 1.0) > 1e-12)
    throw ConfigError("alpha vectors must sum to 1");
  if (!(phase_lo < phase_hi)) throw ConfigError("curriculum phase thresholds must be increasing");
}

VectorXd smooth_errors(const VectorXd& raw) {
  const Eigen::Index n = raw.size();
  if (n == 0) throw ConfigError("smooth_errors needs at least one bin");

  // normalized [exp(-1/2), 1, exp(-1/2)] kernel
  const double side = std::exp(-0.5);
  const double norm = 1.0 + 2.0 * side;
  const double w0 = 1.0 / norm;
  const double w1 = side / norm;

  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = raw[i > 0 ? i - 1 : 0];          // symmetric padding keeps
    const double right = raw[i + 1 < n ? i + 1 : n - 1];  // the total mass intact
    out[i] = w1 * left + w0 * raw[i] + w1 * right;
  }
  return out;
}

Vec3 curriculum_alpha(double lbar_max, const CurriculumState& state) {
  if (lbar_max < state.phase_lo) return state.alpha_init;
  if (lbar_max >= state.phase_hi) return state.alpha_target;
  const double t = (lbar_max - state.phase_lo) / (state.phase_hi - state.phase_lo);
  return (1.0 - t) * state.alpha_init + t * state.alpha_target;
}

VectorXd sampling_distribution(const CurriculumState& state) {
  state.validate();
  const int s = state.bins();
  const Vec3 alpha = curriculum_alpha(state.lbar_max, state);
  const double uniform = 1.0 / static_cast<double>(s);

  VectorXd p = VectorXd::Constant(s, state.eta * uniform);
  for (int k = 0; k < CurriculumState::kChannels; ++k) {
    const double mass = state.errors.row(k).sum();
    if (mass > 0.0) {
      p += (1.0 - state.eta) * alpha[k] * (state.errors.row(k).transpose() / mass);
    } else {
      p.array() += (1.0 - state.eta) * alpha[k] * uniform;
    }
  }
  return p;
}

}  // namespace duet
