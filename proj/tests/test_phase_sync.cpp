#include "doctest.h"

#include "duet/phase_sync.hpp"
#include "duet/errors.hpp"

using namespace duet;

TEST_SUITE("phase_sync") {

TEST_CASE("rate law") {
  CHECK(phase_rate(1.0, 1.0, 0.2) == 1.0);
  CHECK(phase_rate(0.0, 0.5, 0.2) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(phase_rate(4.0, -2.0, 0.0) == 1.0);
}

TEST_CASE("no drift, no delay, equal phases: error stays zero") {
  SyncParams p;
  p.channel.delay_lo = p.channel.delay_hi = 0.0;
  p.duration = 10.0;
  const SyncTrace t = simulate_sync(p);
  for (double e : t.error) CHECK(e == 0.0);
}

TEST_CASE("opposed drifts settle at the proportional fixed point") {
  SyncParams p;
  p.agent1.clock_drift = 1e-3;
  p.agent2.clock_drift = -1e-3;
  p.agent1.gain = p.agent2.gain = 0.2;
  p.channel.delay_lo = p.channel.delay_hi = 0.0;
  p.duration = 30.0;
  const SyncTrace t = simulate_sync(p);

  // fixed point of the coupled rate equations: (rho1 - rho2) / (2k) = 0.005
  const double expect = (p.agent1.clock_drift - p.agent2.clock_drift) / (2.0 * p.agent1.gain);
  CHECK(std::abs(t.error.back() - expect) < 0.05 * expect);
  CHECK(std::abs(t.steady_state_error() - expect) < 0.05 * expect);
}

TEST_CASE("delayed channel stays bounded over a minute") {
  SyncParams p;
  p.agent1.clock_drift = 1e-3;
  p.agent2.clock_drift = 0.0;
  p.channel = {0.02, 0.06, 0.0, 99};
  p.duration = 60.0;
  const SyncTrace t = simulate_sync(p);
  CHECK(t.max_abs_error() < 0.05);
  CHECK(t.steady_state_error() < 0.02);
}

TEST_CASE("open loop diverges linearly") {
  SyncParams p;
  p.agent1.clock_drift = 1e-3;
  p.agent2.clock_drift = -1e-3;
  p.agent1.gain = p.agent2.gain = 0.0;
  p.channel.delay_lo = p.channel.delay_hi = 0.0;
  p.duration = 40.0;
  const SyncTrace t = simulate_sync(p);

  // |error(t)| = (rho1 - rho2) * t
  for (std::size_t i = 0; i < t.time.size(); i += 200) {
    const double expect = 2e-3 * t.time[i];
    CHECK(std::abs(t.error[i] - expect) < 1e-9);
  }
  CHECK(t.error.back() > 0.07);
}

TEST_CASE("phase increments are small and reset-free") {
  SyncParams p;
  p.agent1.clock_drift = 5e-3;
  p.agent2.clock_drift = -5e-3;
  p.channel = {0.02, 0.06, 0.1, 7};
  p.duration = 20.0;
  const SyncTrace t = simulate_sync(p);
  for (std::size_t i = 1; i < t.phi1.size(); ++i) {
    const double step1 = t.phi1[i] - t.phi1[i - 1];
    const double step2 = t.phi2[i] - t.phi2[i - 1];
    const double bound = (1.0 + 5e-3) * (1.0 + 0.2 * t.max_abs_error()) * p.dt + 1e-12;
    CHECK(step1 > 0.0);
    CHECK(step1 <= bound);
    CHECK(step2 > 0.0);
    CHECK(step2 <= bound);
  }
}

TEST_CASE("identical seeds give identical traces; different seeds differ") {
  SyncParams p;
  p.agent1.clock_drift = 1e-3;
  p.channel = {0.02, 0.06, 0.2, 42};
  p.duration = 15.0;
  const SyncTrace a = simulate_sync(p);
  const SyncTrace b = simulate_sync(p);
  CHECK(a.phi1 == b.phi1);
  CHECK(a.phi2 == b.phi2);
  CHECK(a.error == b.error);

  p.channel.seed = 43;
  const SyncTrace c = simulate_sync(p);
  CHECK(a.phi1 != c.phi1);
}

TEST_CASE("one-sided correction still tracks, with a larger offset") {
  SyncParams p;
  p.agent1.clock_drift = 1e-3;
  p.agent2.clock_drift = -1e-3;
  p.channel.delay_lo = p.channel.delay_hi = 0.0;
  p.duration = 40.0;
  p.both_correct = false;
  const SyncTrace t = simulate_sync(p);
  // only one integrator corrects: fixed point doubles to (rho1-rho2)/k
  const double expect = 2e-3 / 0.2;
  CHECK(std::abs(t.steady_state_error() - expect) < 0.05 * expect);
}

TEST_CASE("parameter validation") {
  SyncParams p;
  p.dt = 0.0;
  CHECK_THROWS_AS(simulate_sync(p), ConfigError);
  p = SyncParams{};
  p.channel.delay_hi = 0.01;
  p.channel.delay_lo = 0.02;
  CHECK_THROWS_AS(simulate_sync(p), ConfigError);
  p = SyncParams{};
  p.channel.drop = 1.0;
  CHECK_THROWS_AS(simulate_sync(p), ConfigError);
  p = SyncParams{};
  p.agent1.clock_drift = 0.5;
  CHECK_THROWS_AS(simulate_sync(p), ConfigError);
}

}  // TEST_SUITE
