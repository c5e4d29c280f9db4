#include "duet/phase_sync.hpp"

#include <cmath>
#include <deque>
#include <random>

#include "duet/errors.hpp"

namespace duet {

double phase_rate(double phi_ego, double phi_peer, double gain) {
  return 1.0 + gain * (phi_peer - phi_ego);
}

double SyncTrace::steady_state_error() const {
  if (error.empty()) return 0.0;
  const std::size_t start = error.size() - std::max<std::size_t>(1, error.size() / 5);
  double acc = 0.0;
  for (std::size_t i = start; i < error.size(); ++i) acc += std::abs(error[i]);
  return acc / static_cast<double>(error.size() - start);
}

double SyncTrace::max_abs_error() const {
  double m = 0.0;
  for (double e : error) m = std::max(m, std::abs(e));
  return m;
}

namespace {

struct Message {
  double arrival;
  double sent;
  double phi;
};

struct AgentState {
  double phi = 0.0;
  bool heard_peer = false;
  double peer_phi = 0.0;
  double peer_sent = -1.0;
  std::deque<Message> inbox;

  void deliver(double now) {
    while (!inbox.empty() && inbox.front().arrival <= now) {
      const Message& m = inbox.front();
      if (m.sent > peer_sent) {  // stale messages never overwrite newer state
        peer_sent = m.sent;
        peer_phi = m.phi;
        heard_peer = true;
      }
      inbox.pop_front();
    }
  }
};

}  // namespace

SyncTrace simulate_sync(const SyncParams& params) {
  if (params.dt <= 0.0 || params.duration <= 0.0)
    throw ConfigError("sync simulation needs positive dt and duration");
  if (params.channel.delay_lo < 0.0 || params.channel.delay_hi < params.channel.delay_lo)
    throw ConfigError("sync channel delay bounds must satisfy 0 <= lo <= hi");
  if (params.channel.drop < 0.0 || params.channel.drop >= 1.0)
    throw ConfigError("sync channel drop probability must lie in [0, 1)");
  if (std::abs(params.agent1.clock_drift) >= 0.1 || std::abs(params.agent2.clock_drift) >= 0.1)
    throw ConfigError("clock drift magnitude must stay below 0.1");
  if (params.agent1.gain < 0.0 || params.agent2.gain < 0.0)
    throw ConfigError("sync gains must be non-negative");

  std::mt19937_64 rng(params.channel.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample_delay = [&]() {
    return params.channel.delay_lo +
           (params.channel.delay_hi - params.channel.delay_lo) * unit(rng);
  };

  AgentState a1{params.agent1.phi0, false, 0.0, -1.0, {}};
  AgentState a2{params.agent2.phi0, false, 0.0, -1.0, {}};

  const std::size_t steps = static_cast<std::size_t>(std::llround(params.duration / params.dt));
  SyncTrace trace;
  trace.dt = params.dt;
  trace.time.reserve(steps);

  for (std::size_t step = 0; step < steps; ++step) {
    const double now = static_cast<double>(step) * params.dt;

    // messages depart every step; sampling order is fixed for determinism
    if (unit(rng) >= params.channel.drop)
      a2.inbox.push_back({now + sample_delay(), now, a1.phi});
    else
      sample_delay();
    if (unit(rng) >= params.channel.drop)
      a1.inbox.push_back({now + sample_delay(), now, a2.phi});
    else
      sample_delay();

    a1.deliver(now);
    a2.deliver(now);

    const double r1 =
        a1.heard_peer ? phase_rate(a1.phi, a1.peer_phi, params.agent1.gain) : 1.0;
    const double r2 = (params.both_correct && a2.heard_peer)
                          ? phase_rate(a2.phi, a2.peer_phi, params.agent2.gain)
                          : 1.0;

    trace.time.push_back(now);
    trace.phi1.push_back(a1.phi);
    trace.phi2.push_back(a2.phi);
    trace.rate1.push_back(r1);
    trace.rate2.push_back(r2);
    trace.error.push_back(a1.phi - a2.phi);

    a1.phi += (1.0 + params.agent1.clock_drift) * r1 * params.dt;
    a2.phi += (1.0 + params.agent2.clock_drift) * r2 * params.dt;
  }
  return trace;
}

}  // namespace duet
