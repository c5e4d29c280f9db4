// Compares the serial reference implementations against the OpenMP kernels:
// contact-prior extraction, the penetration sweep, the full metric sweep and
// the reward batch. Usage: duet_bench [frames] [reps]

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#include "duet/fixtures.hpp"
#include "duet/interaction_mesh.hpp"
#include "duet/metrics.hpp"
#include "duet/rewards.hpp"
#include "duet/solver.hpp"

#ifdef DUET_HAVE_OPENMP
#include <omp.h>
#endif

using namespace duet;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e18;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    best = std::min(best, ms);
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-26s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int frames = argc > 1 ? std::atoi(argv[1]) : 600;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  const RobotSpec spec = make_g1_like_robot();
  const MeshConfig mesh_cfg = MeshConfig::default_humanoid();

  // synthesize a long trajectory by cycling a retargeted hug segment
  DualMotionClip clip = make_hug_clip();
  SolverConfig solver_cfg;
  solver_cfg.sqp_iters_per_frame = 1;
  const RobotTrajectory seed = retarget_clip(spec, spec, mesh_cfg, solver_cfg, clip, 1.25);

  RobotTrajectory traj;
  traj.frame_dt = seed.frame_dt;
  traj.robot_names = seed.robot_names;
  for (int t = 0; t < frames; ++t) {
    const std::size_t src = static_cast<std::size_t>(t) % seed.frame_count();
    traj.frames.push_back(seed.frames[src]);
    traj.reference.p_uni.push_back(seed.reference.p_uni[src]);
    traj.reference.p_ind.push_back(seed.reference.p_ind[src]);
  }
  traj.reference.frame_dt = seed.reference.frame_dt;
  traj.reference.keypoint_names = seed.reference.keypoint_names;
  traj.reference.h_robot = seed.reference.h_robot;
  traj.reference.s_individual = seed.reference.s_individual;
  traj.reference.s_unified = seed.reference.s_unified;

  const MeshTopology topo = make_mesh(mesh_cfg, traj.reference.keypoint_names);

#ifdef DUET_HAVE_OPENMP
  std::printf("threads: %d, frames: %d, best of %d\n", omp_get_max_threads(), frames, reps);
#else
  std::printf("built without OpenMP; both columns run the serial path\n");
#endif
  std::printf("%-26s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const double prior_s = time_best_of(reps, [&] {
    traj.priors = extract_priors(topo, traj, spec, spec, Exec::Serial);
  });
  const double prior_p = time_best_of(reps, [&] {
    traj.priors = extract_priors(topo, traj, spec, spec, Exec::Parallel);
  });
  row("contact priors", prior_s, prior_p);

  MetricsOptions ser, par;
  ser.exec = Exec::Serial;
  par.exec = Exec::Parallel;
  const double pen_s =
      time_best_of(reps, [&] { (void)penetration_metrics(traj, spec, spec, ser); });
  const double pen_p =
      time_best_of(reps, [&] { (void)penetration_metrics(traj, spec, spec, par); });
  row("penetration sweep", pen_s, pen_p);

  const double met_s =
      time_best_of(reps, [&] { (void)compute_retarget_metrics(traj, spec, spec, ser); });
  const double met_p =
      time_best_of(reps, [&] { (void)compute_retarget_metrics(traj, spec, spec, par); });
  row("retarget metrics", met_s, met_p);

  std::mt19937 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<InteractionSample> samples(20000);
  for (auto& s : samples) {
    for (int e = 0; e < 8; ++e) {
      s.d_ref.emplace_back(unit(rng), unit(rng), unit(rng));
      s.d_sim.emplace_back(unit(rng), unit(rng), unit(rng));
      s.omega.push_back(unit(rng));
    }
    for (int k = 0; k < 6; ++k) {
      s.contact_sim.push_back(unit(rng) < 0.5);
      s.force.push_back(250.0 * unit(rng));
      s.contact_active.push_back(unit(rng) < 0.5);
    }
  }
  RewardConfig reward_cfg;
  const double rew_s = time_best_of(reps, [&] {
    (void)r_inter_batch(samples, reward_cfg, Exec::Serial);
    (void)r_contact_batch(samples, reward_cfg, Exec::Serial);
  });
  const double rew_p = time_best_of(reps, [&] {
    (void)r_inter_batch(samples, reward_cfg, Exec::Parallel);
    (void)r_contact_batch(samples, reward_cfg, Exec::Parallel);
  });
  row("reward batch (20k)", rew_s, rew_p);

  // sanity: serial and parallel sweeps agree bitwise
  const RetargetMetrics a = compute_retarget_metrics(traj, spec, spec, ser);
  const RetargetMetrics b = compute_retarget_metrics(traj, spec, spec, par);
  if (a.trace_depth != b.trace_depth || a.iee_retarget != b.iee_retarget) {
    std::fprintf(stderr, "serial/parallel mismatch\n");
    return 1;
  }
  return 0;
}
