// Regenerates the bundled fixtures (robot spec, synthetic clips, demo BVH
// pair, default config). Usage: gen_fixtures <output-dir>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "duet/fixtures.hpp"
#include "duet/trajectory_io.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);

  try {
    duet::atomic_write_file((dir / "g1_like_29dof.json").string(), duet::g1_like_robot_json());

    {
      std::ostringstream out;
      duet::write_keypoint_clip(duet::make_handshake_clip(), out);
      duet::atomic_write_file((dir / "handshake.kpts").string(), out.str());
    }
    {
      std::ostringstream out;
      duet::write_keypoint_clip(duet::make_hug_clip(), out);
      duet::atomic_write_file((dir / "hug.kpts").string(), out.str());
    }

    duet::atomic_write_file((dir / "greeting_a.bvh").string(), duet::make_greeting_bvh(1.75, -1.0));
    duet::atomic_write_file((dir / "greeting_b.bvh").string(), duet::make_greeting_bvh(1.80, 1.0));
    duet::atomic_write_file((dir / "bvh_map.json").string(), duet::greeting_bvh_map_json());

    const std::string config = R"({
 "h_robot": 1.25,
 "height_strategy": "head_foot",
 "solver": {
  "w_self": 2.0,
  "w_inter": 10.0,
  "w_reg": 0.1,
  "lambda_rot": 0.1,
  "trust_delta": 0.05,
  "eps_safe": 0.005,
  "eps_stick": 0.002,
  "sqp_iters_per_frame": 3
 },
 "mesh": {
  "omega_max": 1.0,
  "gamma": 5.0,
  "r_inter": 1.0,
  "eps_contact": 0.02
 }
}
)";
    duet::atomic_write_file((dir / "default_config.json").string(), config);
  } catch (const std::exception& e) {
    std::cerr << "gen_fixtures: " << e.what() << "\n";
    return 1;
  }
  std::cout << "fixtures written to " << dir.string() << "\n";
  return 0;
}
