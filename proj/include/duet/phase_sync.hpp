#pragma once

#include <cstdint>
#include <vector>

namespace duet {

/// Proportional phase correction: rate = 1 + k * (phi_peer - phi_ego).
double phase_rate(double phi_ego, double phi_peer, double gain);

struct SyncAgentParams {
  double phi0 = 0.0;
  double clock_drift = 0.0;  // rho: effective clock rate is 1 + rho
  double gain = 0.2;
};

struct ChannelModel {
  double delay_lo = 0.02;  // seconds
  double delay_hi = 0.06;
  double drop = 0.0;  // message loss probability in [0, 1)
  std::uint64_t seed = 1;
};

struct SyncTrace {
  double dt = 0.0;
  std::vector<double> time;
  std::vector<double> phi1, phi2;
  std::vector<double> rate1, rate2;
  std::vector<double> error;  // phi1 - phi2

  double steady_state_error() const;  // mean |error| over the last 20%
  double max_abs_error() const;
};

struct SyncParams {
  SyncAgentParams agent1, agent2;
  ChannelModel channel;
  double dt = 0.02;  // 50 Hz control step
  double duration = 60.0;
  bool both_correct = true;  // apply the correction law on both agents
};

/// Deterministic discrete-time simulation. Each step both agents broadcast
/// their phase; messages arrive after a sampled delay and the latest-sent
/// delivered value feeds the rate law. Before any delivery an agent runs
/// open loop. Identical seeds yield identical traces.
SyncTrace simulate_sync(const SyncParams& params);

}  // namespace duet
