#pragma once

// Four estimators of the normal correlation rho built from r_P, r_S and r_K,
// with their large-sample bias, variance and efficiency.

#include <array>
#include <cstdint>
#include <string_view>

#include "rankmoments/correlation.hpp"
#include "rankmoments/quadrature.hpp"

namespace rankmoments {

enum class EstimatorKind { P, S, K, M };

inline constexpr std::array<EstimatorKind, 4> kAllEstimators = {EstimatorKind::P, EstimatorKind::S, EstimatorKind::K,
                                                                EstimatorKind::M};

std::string_view to_string(EstimatorKind kind);
/// "P", "S", "K" or "M" (case-insensitive); throws ParseError otherwise.
EstimatorKind parse_estimator(std::string_view text);

/// P: r_P.  S: 2 sin(pi rS / 6).  K: sin(pi rK / 2).
/// M: 2 sin(pi rS / 6 - (pi / 2)(rK - rS)/(n - 2)), needs n >= 3.
/// Results are clamped to [-1, 1].
double estimate_from(EstimatorKind kind, double rp, double rs, double rk, std::int64_t n);
double estimate(EstimatorKind kind, const PairedSample& sample);

struct MomentReport {
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  double crlb = 0.0;
  double are = 0.0;
};

/// Large-sample bias; S and M use the exact Var(rS) and Cov(rS, rK).
double bias_theoretical(EstimatorKind kind, double rho, std::int64_t n, const QuadratureSettings& settings = {});
double variance_theoretical(EstimatorKind kind, double rho, std::int64_t n, const QuadratureSettings& settings = {});
double crlb(double rho, std::int64_t n);
/// Asymptotic efficiency relative to r_P. ARE_P = 1 and ARE_M = ARE_S;
/// rho = +-1 uses the closed-form limits. ARE_S loses accuracy within about
/// 1e-6 of +-1, where numerator and denominator both vanish.
double are(EstimatorKind kind, double rho, const QuadratureSettings& settings = {});

MomentReport moment_report(EstimatorKind kind, double rho, std::int64_t n, const QuadratureSettings& settings = {});

}  // namespace rankmoments
