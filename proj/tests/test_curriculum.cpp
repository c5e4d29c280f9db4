#include <random>

#include "doctest.h"

#include "duet/curriculum.hpp"
#include "support/oracles.hpp"

using namespace duet;

namespace {

CurriculumState random_state(std::mt19937& rng, int bins) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CurriculumState s;
  s.errors = MatrixXd::Zero(3, bins);
  for (int k = 0; k < 3; ++k)
    for (int b = 0; b < bins; ++b) s.errors(k, b) = unit(rng) < 0.1 ? 0.0 : unit(rng);
  s.lbar_max = 700.0 * unit(rng);
  return s;
}

}  // namespace

TEST_SUITE("curriculum") {

TEST_CASE("smoothing keeps constants and total mass") {
  const VectorXd c = VectorXd::Constant(7, 3.25);
  const VectorXd out = smooth_errors(c);
  for (int i = 0; i < 7; ++i) CHECK(out[i] == doctest::Approx(3.25).epsilon(1e-14));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd x = oracles::random_vector(1 + static_cast<int>(rng() % 30u), rng).cwiseAbs();
    const VectorXd y = smooth_errors(x);
    CHECK(y.minCoeff() >= 0.0);
    CHECK(y.sum() == doctest::Approx(x.sum()).epsilon(1e-9));
  }
  CHECK_THROWS_AS(smooth_errors(VectorXd()), ConfigError);
}

TEST_CASE("unit impulse spreads into the kernel") {
  VectorXd x = VectorXd::Zero(5);
  x[2] = 1.0;
  const VectorXd y = smooth_errors(x);
  const double side = std::exp(-0.5);
  const double norm = 1.0 + 2.0 * side;
  CHECK(y[1] == doctest::Approx(side / norm).epsilon(1e-12));
  CHECK(y[2] == doctest::Approx(1.0 / norm).epsilon(1e-12));
  CHECK(y[3] == doctest::Approx(side / norm).epsilon(1e-12));
  CHECK(y[0] == 0.0);
  // kernel weights land close to [0.274, 0.452, 0.274]
  CHECK(side / norm == doctest::Approx(0.274).epsilon(2e-3));
  CHECK(1.0 / norm == doctest::Approx(0.452).epsilon(2e-3));
}

TEST_CASE("smoothing matches the naive convolution") {
  std::mt19937 rng(7);
  const double side = std::exp(-0.5);
  const double norm = 1.0 + 2.0 * side;
  for (int trial = 0; trial < 30; ++trial) {
    const VectorXd x = oracles::random_vector(2 + static_cast<int>(rng() % 20u), rng).cwiseAbs();
    const VectorXd got = smooth_errors(x);
    const VectorXd expect = oracles::convolve3_oracle(x, side / norm, 1.0 / norm);
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("curriculum phase weights at the published thresholds") {
  CurriculumState s;
  s.errors = MatrixXd::Ones(3, 4);
  CHECK((curriculum_alpha(300.0, s) - Vec3(0.8, 0.1, 0.1)).norm() < 1e-15);
  CHECK((curriculum_alpha(349.999, s) - Vec3(0.8, 0.1, 0.1)).norm() < 1e-12);
  CHECK((curriculum_alpha(425.0, s) - Vec3(0.425, 0.2, 0.375)).norm() < 1e-12);
  CHECK((curriculum_alpha(500.0, s) - Vec3(0.05, 0.30, 0.65)).norm() < 1e-15);
  CHECK((curriculum_alpha(600.0, s) - Vec3(0.05, 0.30, 0.65)).norm() < 1e-15);

  // continuity and unit sum across the whole range
  for (double l = 0.0; l <= 700.0; l += 12.5) {
    const Vec3 a = curriculum_alpha(l, s);
    CHECK(a.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const Vec3 b = curriculum_alpha(l + 1e-7, s);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("uniform errors give the uniform distribution") {
  CurriculumState s;
  s.errors = MatrixXd::Constant(3, 5, 0.7);
  s.lbar_max = 400.0;
  const VectorXd p = sampling_distribution(s);
  for (int i = 0; i < 5; ++i) CHECK(p[i] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("single-bin error mass with stability weights") {
  CurriculumState s;
  s.errors = MatrixXd::Zero(3, 4);
  s.errors(0, 0) = 2.0;  // all failure mass in bin 0, alpha = (1,0,0) ~ (0.8,.1,.1)
  s.alpha_init = Vec3(1.0, 0.0, 0.0);
  s.alpha_target = Vec3(1.0, 0.0, 0.0);
  s.lbar_max = 0.0;
  const VectorXd p = sampling_distribution(s);
  CHECK(p[0] == doctest::Approx(0.05 / 4.0 + 0.95).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.0125).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.0125).epsilon(1e-12));
  CHECK(p[3] == doctest::Approx(0.0125).epsilon(1e-12));
}

TEST_CASE("random landscapes: distribution properties and the direct formula") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const int bins = 1 + static_cast<int>(rng() % 12u);
    const CurriculumState s = random_state(rng, bins);
    const VectorXd p = sampling_distribution(s);

    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.minCoeff() >= s.eta / bins - 1e-12);  // exploration floor
    CHECK(p.minCoeff() > 0.0);

    // direct formula
    const Vec3 alpha = curriculum_alpha(s.lbar_max, s);
    for (int b = 0; b < bins; ++b) {
      double expect = s.eta / bins;
      for (int k = 0; k < 3; ++k) {
        const double mass = s.errors.row(k).sum();
        expect += (1.0 - s.eta) * alpha[k] * (mass > 0.0 ? s.errors(k, b) / mass : 1.0 / bins);
      }
      CHECK(p[b] == doctest::Approx(expect).epsilon(1e-12));
    }

    // scale invariance per channel
    CurriculumState scaled = s;
    scaled.errors *= 17.5;
    const VectorXd p2 = sampling_distribution(scaled);
    CHECK((p - p2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("state validation") {
  CurriculumState bad;
  bad.errors = MatrixXd::Constant(3, 2, -1.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.errors = MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.errors = MatrixXd::Ones(3, 2);
  bad.alpha_init = Vec3(0.5, 0.1, 0.1);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

}  // TEST_SUITE
