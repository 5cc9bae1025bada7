#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rankmoments/errors.hpp"
#include "rankmoments/estimators.hpp"

using namespace rankmoments;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("estimators from coefficients") {
  CHECK(estimate_from(EstimatorKind::P, 0.3, 0, 0, 10) == 0.3);
  CHECK(estimate_from(EstimatorKind::S, 0, 1.0, 0, 10) == doctest::Approx(1.0));
  CHECK(estimate_from(EstimatorKind::K, 0, 0, 1.0, 10) == 1.0);
  CHECK(estimate_from(EstimatorKind::K, 0, 0, 1.0 / 3.0, 10) == doctest::Approx(0.5));
  CHECK(estimate_from(EstimatorKind::S, 0, 0.5, 0, 10) == doctest::Approx(2 * std::sin(kPi / 12)));
  // M equals S when rK = rS
  CHECK(estimate_from(EstimatorKind::M, 0, 0.4, 0.4, 10) == estimate_from(EstimatorKind::S, 0, 0.4, 0, 10));
  CHECK(estimate_from(EstimatorKind::M, 0, 1.0, 0.2, 3) >= -1.0);
  CHECK_THROWS_AS(estimate_from(EstimatorKind::M, 0, 0.1, 0.1, 2), SizeError);
  for (double r : {-1.0, -0.4, 0.0, 0.8, 1.0}) {
    for (auto k : kAllEstimators) {
      const double v = estimate_from(k, r, r, r, 5);
      CHECK(std::abs(v) <= 1.0);
    }
  }
}

TEST_CASE("estimators from a sample") {
  PairedSample s({1, 2, 3, 4}, {1, 3, 2, 4});
  CHECK(estimate(EstimatorKind::K, s) == doctest::Approx(std::sin(kPi / 3)));
  CHECK(estimate(EstimatorKind::S, s) == doctest::Approx(2 * std::sin(kPi * 0.8 / 6)));
  CHECK(estimate(EstimatorKind::M, s) ==
        doctest::Approx(2 * std::sin(kPi * 0.8 / 6 - kPi / 2 * (2.0 / 3.0 - 0.8) / 2)));
  CHECK_THROWS_AS(estimate(EstimatorKind::M, PairedSample({1, 2}, {2, 1})), SizeError);
}

TEST_CASE("names") {
  for (auto k : kAllEstimators) CHECK(parse_estimator(to_string(k)) == k);
  CHECK(parse_estimator("m") == EstimatorKind::M);
  CHECK_THROWS_AS(parse_estimator("Q"), ParseError);
  CHECK_THROWS_AS(parse_estimator("PS"), ParseError);
}

TEST_CASE("efficiency endpoints") {
  CHECK(std::abs(are(EstimatorKind::S, 0.0) - 9 / (kPi * kPi)) < 1e-10);
  CHECK(std::abs(are(EstimatorKind::K, 0.0) - 9 / (kPi * kPi)) < 1e-10);
  CHECK(std::abs(are(EstimatorKind::S, 1.0) - (15 + 11 * std::sqrt(5.0)) / 57) < 1e-9);
  CHECK(std::abs(are(EstimatorKind::K, 1.0) - 3 * std::sqrt(3.0) / (2 * kPi)) < 1e-12);
  CHECK(are(EstimatorKind::K, -1.0) == are(EstimatorKind::K, 1.0));
  // the closed-form endpoint continues the interior values
  CHECK(are(EstimatorKind::K, 1 - 1e-9) == doctest::Approx(are(EstimatorKind::K, 1.0)).epsilon(1e-6));
  // closer than about 1e-6 the interior formula is a ratio of two vanishing quantities
  CHECK(are(EstimatorKind::S, 1 - 1e-5) == doctest::Approx(are(EstimatorKind::S, 1.0)).epsilon(1e-3));
  CHECK(are(EstimatorKind::P, 0.3) == 1.0);
  CHECK(are(EstimatorKind::M, 0.3) == are(EstimatorKind::S, 0.3));
}

TEST_CASE("efficiency ordering and range") {
  for (int k = 0; k <= 100; ++k) {
    const double rho = 0.01 * k;
    const double s = are(EstimatorKind::S, rho), kk = are(EstimatorKind::K, rho);
    CAPTURE(rho);
    CHECK(kk >= s - 1e-12);
    CHECK(s > 0.0);
    CHECK(kk <= 1.0);
  }
}

TEST_CASE("efficiency is the large-n variance ratio") {
  const std::int64_t n = 10000000;
  for (double rho : {0.0, 0.35, 0.8}) {
    for (auto k : {EstimatorKind::S, EstimatorKind::K, EstimatorKind::M}) {
      const double ratio = crlb(rho, n) / variance_theoretical(k, rho, n);
      CHECK(ratio == doctest::Approx(are(k, rho)).epsilon(1e-5));
    }
  }
}

TEST_CASE("bias and variance properties") {
  for (auto k : kAllEstimators) {
    for (double rho : {0.2, 0.5, 0.9}) {
      CHECK(bias_theoretical(k, -rho, 10) == doctest::Approx(-bias_theoretical(k, rho, 10)).epsilon(1e-12));
      const auto r = moment_report(k, rho, 10);
      CHECK(r.mse == r.variance + r.bias * r.bias);
      CHECK(r.variance > 0.0);
      CHECK(r.crlb == doctest::Approx((1 - rho * rho) * (1 - rho * rho) / 10));
    }
    CHECK(bias_theoretical(k, 0.0, 12) == 0.0);
    CHECK(variance_theoretical(k, 1.0, 12) == doctest::Approx(0.0).epsilon(1e-9));
  }
  CHECK(bias_theoretical(EstimatorKind::P, 0.5, 20) == doctest::Approx(-0.5 * 0.75 / 40));
  CHECK_THROWS_AS(bias_theoretical(EstimatorKind::S, 0.5, 3), SizeError);
  CHECK_THROWS_AS(variance_theoretical(EstimatorKind::S, 1.5, 10), DomainError);
}
