#include <random>
#include <sstream>

#include "doctest.h"

#include "duet/fixtures.hpp"
#include "duet/manifolds.hpp"
#include "support/oracles.hpp"

using namespace duet;

namespace {

DualMotionClip template_clip(double h1, double h2, int frames, double separation = 2.0) {
  auto t1 = human_template(h1);
  auto t2 = human_template(h2);
  for (Vec3& p : t1) p.x() -= separation / 2.0;
  for (Vec3& p : t2) p.x() += separation / 2.0;
  return make_static_clip({t1, t2}, human_template_names(), frames, 0.02);
}

}  // namespace

TEST_SUITE("clip") {

TEST_CASE("keypoint clip round trip is exact") {
  std::mt19937 rng(3);
  DualMotionClip clip = template_clip(1.7, 1.8, 4);
  for (auto& frame : clip.frames)
    for (int a = 0; a < 2; ++a)
      for (Vec3& p : frame[a]) p += oracles::random_vec3(rng, 0.01);

  std::ostringstream out;
  write_keypoint_clip(clip, out);
  std::istringstream in(out.str());
  const DualMotionClip back = read_keypoint_clip(in);

  REQUIRE(back.frame_count() == clip.frame_count());
  CHECK(back.frame_dt == clip.frame_dt);
  CHECK(back.keypoint_names == clip.keypoint_names);
  for (std::size_t t = 0; t < clip.frame_count(); ++t)
    for (int a = 0; a < 2; ++a)
      for (std::size_t k = 0; k < clip.keypoint_count(); ++k)
        CHECK(back.frames[t][a][k] == clip.frames[t][a][k]);  // bitwise
}

TEST_CASE("parse errors carry line numbers") {
  const char* missing_names = "DUET-KPTS 1\nagents 2\nkeypoints 2\nframe_dt 0.02\n";
  std::istringstream in1(missing_names);
  CHECK_THROWS_AS(read_keypoint_clip(in1), ParseError);

  const char* bad_agents = "DUET-KPTS 1\nagents 3\n";
  std::istringstream in2(bad_agents);
  CHECK_THROWS_AS(read_keypoint_clip(in2), ParseError);

  const char* nan_data =
      "DUET-KPTS 1\nagents 2\nkeypoints 1\nframe_dt 0.02\nframes 1\nnames a\n"
      "nan 0 0 0 0 0\n";
  std::istringstream in3(nan_data);
  try {
    read_keypoint_clip(in3);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }

  const char* short_frames =
      "DUET-KPTS 1\nagents 2\nkeypoints 1\nframe_dt 0.02\nframes 2\nnames a\n"
      "0 0 0 0 0 0\n";
  std::istringstream in4(short_frames);
  CHECK_THROWS_WITH_AS(read_keypoint_clip(in4), doctest::Contains("frame-count"), ParseError);

  const char* trailing =
      "DUET-KPTS 1\nagents 2\nkeypoints 1\nframe_dt 0.02\nframes 1\nnames a\n"
      "0 0 0 0 0 0\n1 2 3 4 5 6\n";
  std::istringstream in5(trailing);
  CHECK_THROWS_WITH_AS(read_keypoint_clip(in5), doctest::Contains("trailing"), ParseError);
}

}  // TEST_SUITE

TEST_SUITE("manifolds") {

TEST_CASE("scale factors derive from the actor heights") {
  const DualMotionClip clip = template_clip(1.75, 1.80, 12);
  const ReferencePair ref = build_manifolds(clip, 1.3);
  CHECK(ref.s_individual[0] == doctest::Approx(1.3 / 1.75).epsilon(1e-12));
  CHECK(ref.s_individual[1] == doctest::Approx(1.3 / 1.80).epsilon(1e-12));
  CHECK(ref.s_unified ==
        doctest::Approx(0.5 * (1.3 / 1.75 + 1.3 / 1.80)).epsilon(1e-12));
  CHECK(ref.s_individual[0] == doctest::Approx(0.742857142857143).epsilon(1e-12));
  CHECK(ref.s_individual[1] == doctest::Approx(0.722222222222222).epsilon(1e-12));
  CHECK(ref.s_unified == doctest::Approx(0.732539682539683).epsilon(1e-12));
}

TEST_CASE("identical actors collapse the manifolds") {
  const DualMotionClip clip = template_clip(1.75, 1.75, 5);
  const ReferencePair ref = build_manifolds(clip, 1.3);
  for (std::size_t t = 0; t < ref.frame_count(); ++t)
    for (int a = 0; a < 2; ++a)
      for (std::size_t k = 0; k < clip.keypoint_count(); ++k)
        CHECK((ref.p_ind[t][a][k] - ref.p_uni[t][a][k]).norm() < 1e-15);
}

TEST_CASE("unified scaling preserves relative distances exactly") {
  const DualMotionClip clip = template_clip(2.0, 2.0, 3, 1.0);
  const ReferencePair ref = build_manifolds(clip, 1.5);  // s_unified = 0.75
  CHECK(ref.s_unified == doctest::Approx(0.75).epsilon(1e-15));
  const int lh = clip.keypoint_index("l_hand");
  const double raw =
      (clip.frames[0][0][static_cast<std::size_t>(lh)] - clip.frames[0][1][static_cast<std::size_t>(lh)]).norm();
  const double uni =
      (ref.p_uni[0][0][static_cast<std::size_t>(lh)] - ref.p_uni[0][1][static_cast<std::size_t>(lh)]).norm();
  CHECK(uni == doctest::Approx(0.75 * raw).epsilon(1e-12));
}

TEST_CASE("scaling linearity and inter-agent geometry properties") {
  std::mt19937 rng(11);
  DualMotionClip clip = template_clip(1.6, 1.9, 6);
  for (auto& frame : clip.frames)
    for (int a = 0; a < 2; ++a)
      for (std::size_t k = 1; k < clip.keypoint_count(); ++k)
        frame[a][k] += oracles::random_vec3(rng, 0.02);
  const ReferencePair ref = build_manifolds(clip, 1.3);

  for (std::size_t t = 0; t < ref.frame_count(); ++t) {
    for (int a = 0; a < 2; ++a) {
      const double s = ref.s_individual[static_cast<std::size_t>(a)];
      for (std::size_t k = 0; k < clip.keypoint_count(); ++k) {
        const Vec3 expect = s * clip.frames[t][a][k];
        CHECK((ref.p_ind[t][a][k] - expect).norm() <= 1e-12 * std::max(1.0, expect.norm()));
      }
    }
    for (std::size_t i = 0; i < clip.keypoint_count(); i += 3) {
      for (std::size_t j = 0; j < clip.keypoint_count(); j += 4) {
        const double raw = (clip.frames[t][0][i] - clip.frames[t][1][j]).norm();
        const double uni = (ref.p_uni[t][0][i] - ref.p_uni[t][1][j]).norm();
        CHECK(uni == doctest::Approx(ref.s_unified * raw).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("height estimation strategies and failure modes") {
  const DualMotionClip clip = template_clip(1.75, 1.80, 3);
  CHECK(estimate_height(clip, 0, "head_foot") == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(estimate_height(clip, 1, "bbox") == doctest::Approx(1.80).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_height(clip, 0, "nope"), ConfigError);

  // degenerate: all keypoints at the same height
  auto flat = human_template(1.75);
  for (Vec3& p : flat) p.z() = 0.0;
  const DualMotionClip flat_clip = make_static_clip({flat, flat}, human_template_names(), 2, 0.02);
  CHECK_THROWS_AS(build_manifolds(flat_clip, 1.3), ConfigError);
  CHECK_THROWS_AS(build_manifolds(clip, -1.0), ConfigError);
}

}  // TEST_SUITE
