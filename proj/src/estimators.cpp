#include "rankmoments/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "rankmoments/binormal.hpp"
#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

void check_rho(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("rho outside [-1, 1]");
}

void check_n(std::int64_t n, std::int64_t min_n) {
  if (n < min_n) throw SizeError("n = " + std::to_string(n) + " below the minimum " + std::to_string(min_n));
}

// (n+1)^2 var_S - 6(n+1) cov + 9 var_K, shared by the M-estimator formulas.
double m_combination(double rho, std::int64_t n, const QuadratureSettings& settings) {
  const double m = static_cast<double>(n);
  const double vs = var_rs_exact(rho, n, settings);
  const double vk = lemma2_moments(rho, n).var_rk;
  const double c = cov_rs_rk_exact(rho, n, settings);
  return (m + 1.0) * (m + 1.0) * vs - 6.0 * (m + 1.0) * c + 9.0 * vk;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::P: return "P";
    case EstimatorKind::S: return "S";
    case EstimatorKind::K: return "K";
    case EstimatorKind::M: return "M";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'P': return EstimatorKind::P;
      case 'S': return EstimatorKind::S;
      case 'K': return EstimatorKind::K;
      case 'M': return EstimatorKind::M;
      default: break;
    }
  }
  throw ParseError("unknown estimator '" + std::string(text) + "' (expected P, S, K or M)");
}

double estimate_from(EstimatorKind kind, double rp, double rs, double rk, std::int64_t n) {
  double v = 0.0;
  switch (kind) {
    case EstimatorKind::P: v = rp; break;
    case EstimatorKind::S: v = 2.0 * std::sin(kPi * rs / 6.0); break;
    case EstimatorKind::K: v = std::sin(kPi * rk / 2.0); break;
    case EstimatorKind::M:
      if (n <= 2) throw SizeError("the M estimator needs n >= 3");
      v = 2.0 * std::sin(kPi * rs / 6.0 - kPi / 2.0 * (rk - rs) / static_cast<double>(n - 2));
      break;
  }
  return std::clamp(v, -1.0, 1.0);
}

double estimate(EstimatorKind kind, const PairedSample& sample) {
  const auto n = static_cast<std::int64_t>(sample.size());
  if (kind == EstimatorKind::M && n <= 2) throw SizeError("the M estimator needs n >= 3");
  switch (kind) {
    case EstimatorKind::P: return estimate_from(kind, pearson(sample), 0.0, 0.0, n);
    case EstimatorKind::S: return estimate_from(kind, 0.0, spearman(sample), 0.0, n);
    case EstimatorKind::K: return estimate_from(kind, 0.0, 0.0, kendall(sample), n);
    case EstimatorKind::M: return estimate_from(kind, 0.0, spearman(sample), kendall(sample), n);
  }
  return 0.0;
}

double bias_theoretical(EstimatorKind kind, double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_rho(rho);
  check_n(n, 4);
  const double m = static_cast<double>(n);
  const double s1 = std::asin(rho), s2 = std::asin(rho / 2.0);
  switch (kind) {
    case EstimatorKind::P: return -rho * (1.0 - rho * rho) / (2.0 * m);
    case EstimatorKind::S:
      return std::sqrt(4.0 - rho * rho) / (m + 1.0) * (s1 - 3.0 * s2) - kPi2 * rho / 72.0 * var_rs_exact(rho, n, settings);
    case EstimatorKind::K: return -kPi2 * rho / 8.0 * lemma2_moments(rho, n).var_rk;
    case EstimatorKind::M:
      return -kPi2 * rho / (72.0 * (m - 2.0) * (m - 2.0)) * m_combination(rho, n, settings);
  }
  return 0.0;
}

double variance_theoretical(EstimatorKind kind, double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_rho(rho);
  check_n(n, 4);
  const double m = static_cast<double>(n);
  const double v = [&] {
    switch (kind) {
      case EstimatorKind::P: return (1.0 - rho * rho) * (1.0 - rho * rho) / (m - 1.0);
      case EstimatorKind::S: return kPi2 * (4.0 - rho * rho) / 36.0 * var_rs_exact(rho, n, settings);
      case EstimatorKind::K: return kPi2 * (1.0 - rho * rho) / 4.0 * lemma2_moments(rho, n).var_rk;
      case EstimatorKind::M:
        return kPi2 * (4.0 - rho * rho) / (36.0 * (m - 2.0) * (m - 2.0)) * m_combination(rho, n, settings);
    }
    return 0.0;
  }();
  return std::max(v, 0.0);
}

double crlb(double rho, std::int64_t n) {
  check_rho(rho);
  check_n(n, 1);
  return (1.0 - rho * rho) * (1.0 - rho * rho) / static_cast<double>(n);
}

double are(EstimatorKind kind, double rho, const QuadratureSettings& settings) {
  check_rho(rho);
  if (kind == EstimatorKind::P) return 1.0;
  const double s2 = std::asin(rho / 2.0);
  if (kind == EstimatorKind::K) {
    if (std::abs(rho) == 1.0) return 3.0 * std::sqrt(3.0) / (2.0 * kPi);
    return 9.0 * (1.0 - rho * rho) / (kPi2 - 36.0 * s2 * s2);
  }
  if (std::abs(rho) == 1.0) return (15.0 + 11.0 * std::sqrt(5.0)) / 57.0;
  const double o1 = omegas(rho, settings).omega1;
  return 36.0 * (1.0 - rho * rho) * (1.0 - rho * rho) / ((4.0 - rho * rho) * (9.0 * kPi2 * o1 - 324.0 * s2 * s2));
}

MomentReport moment_report(EstimatorKind kind, double rho, std::int64_t n, const QuadratureSettings& settings) {
  MomentReport r;
  r.bias = bias_theoretical(kind, rho, n, settings);
  r.variance = variance_theoretical(kind, rho, n, settings);
  r.mse = r.variance + r.bias * r.bias;
  r.crlb = crlb(rho, n);
  r.are = are(kind, rho, settings);
  return r;
}

}  // namespace rankmoments
