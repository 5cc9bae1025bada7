#include "rankmoments/orthant.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitTol = 1e-14;  // |rho| this close to 1 counts as exactly degenerate
constexpr double kGuard = 1e-14;

double clamped_asin(double x, double clamp_eps) {
  if (std::abs(x) > 1.0 + clamp_eps) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "arcsine argument " << x << " outside [-1, 1]";
    throw DomainError(msg.str());
  }
  return std::asin(std::clamp(x, -1.0, 1.0));
}

double asin_sum(const CorrelationMatrix4& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) s += std::asin(std::clamp(r(i, j), -1.0, 1.0));
  return s;
}

// Degenerate case: some pair is perfectly (anti)correlated, so P4 collapses
// to a trivariate probability or vanishes.
bool reduce_degenerate(const CorrelationMatrix4& r, double& p4) {
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double v = r(i, j);
      if (v <= -1.0 + kUnitTol) {
        p4 = 0.0;
        return true;
      }
      if (v >= 1.0 - kUnitTol) {
        std::array<std::size_t, 3> keep{};
        std::size_t k = 0;
        for (std::size_t t = 0; t < 4; ++t)
          if (t != j) keep[k++] = t;
        p4 = orthant_p3(r(keep[0], keep[1]), r(keep[0], keep[2]), r(keep[1], keep[2]));
        return true;
      }
    }
  }
  return false;
}

// One Childs term in the variable theta, u = sin(theta). Quantities of the
// form c0 - c1 u^2 are evaluated as (c0 - c1) + c1 cos^2(theta).
struct ChildsTerm {
  double rho1l;
  double a_const, a_coef;              // alpha
  double b_const, b_coef;              // first radicand
  double g_const, g_coef;              // second radicand
  double clamp_eps;

  double ratio_at(double theta) const {
    const double c = std::cos(theta);
    const double c2 = c * c;
    const double alpha = a_const + a_coef * c2;
    const double bg = std::sqrt(std::max(0.0, b_const + b_coef * c2)) * std::sqrt(std::max(0.0, g_const + g_coef * c2));
    if (bg < kGuard) return limit_ratio(theta);
    return alpha / bg;
  }

  // One-sided limit of alpha/(beta gamma) approaching theta from below.
  double limit_ratio(double theta) const {
    double h = 1e-4;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < 40; ++k, h *= 0.5) {
      const double t = theta - h;
      if (t <= 0.0) continue;
      const double c = std::cos(t);
      const double c2 = c * c;
      const double bg =
          std::sqrt(std::max(0.0, b_const + b_coef * c2)) * std::sqrt(std::max(0.0, g_const + g_coef * c2));
      if (bg < kGuard) break;
      const double cur = (a_const + a_coef * c2) / bg;
      if (std::isfinite(prev) && std::abs(cur - prev) < 1e-12) return cur;
      prev = cur;
    }
    return std::isfinite(prev) ? prev : 0.0;
  }

  double operator()(double theta) const {
    const double c = std::cos(theta);
    const double weight = rho1l * c / std::sqrt((1.0 - rho1l * rho1l) + rho1l * rho1l * c * c);
    return weight * clamped_asin(ratio_at(theta), clamp_eps);
  }
};

struct Radicand {
  double constant, coef;  // value at u: constant + coef * cos^2(theta)
};

// 1 - r_jk^2 - (r_1j^2 + r_1k^2 - 2 r_1j r_1k r_jk) u^2
Radicand radicand(double r1j, double r1k, double rjk) {
  const double k = r1j * r1j + r1k * r1k - 2.0 * r1j * r1k * rjk;
  const double det = 1.0 - r1j * r1j - r1k * r1k - rjk * rjk + 2.0 * r1j * r1k * rjk;
  return {det, k};
}

}  // namespace

CorrelationMatrix4::CorrelationMatrix4() : m_{} {
  for (std::size_t i = 0; i < 4; ++i) m_[i * 4 + i] = 1.0;
}

CorrelationMatrix4::CorrelationMatrix4(const std::array<double, 16>& entries) : m_(entries) {}

CorrelationMatrix4 CorrelationMatrix4::from_upper(double r12, double r13, double r14, double r23, double r24,
                                                  double r34) {
  return CorrelationMatrix4({1.0, r12, r13, r14, r12, 1.0, r23, r24, r13, r23, 1.0, r34, r14, r24, r34, 1.0});
}

void CorrelationMatrix4::set(std::size_t i, std::size_t j, double v) {
  m_[i * 4 + j] = v;
  m_[j * 4 + i] = v;
}

double CorrelationMatrix4::min_eigenvalue() const {
  Eigen::Matrix4d a;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void CorrelationMatrix4::validate(double psd_tol) const {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite((*this)(i, i)) || std::abs((*this)(i, i) - 1.0) > 1e-12) {
      throw DomainError("correlation matrix must have unit diagonal");
    }
    for (std::size_t j = 0; j < 4; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v != (*this)(j, i)) throw DomainError("correlation matrix must be symmetric");
      if (std::abs(v) > 1.0 + 1e-12) throw DomainError("correlation entry outside [-1, 1]");
    }
  }
  const double lmin = min_eigenvalue();
  if (lmin < -psd_tol) {
    std::ostringstream msg;
    msg << "correlation matrix is not positive semidefinite (smallest eigenvalue " << lmin << ")";
    throw DomainError(msg.str());
  }
}

CorrelationMatrix4 CorrelationMatrix4::permuted(const std::array<std::size_t, 4>& perm) const {
  CorrelationMatrix4 out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out.m_[i * 4 + j] = (*this)(perm[i], perm[j]);
  return out;
}

double orthant_p2(double rho12, double clamp_eps) {
  return 0.25 * (1.0 + (2.0 / kPi) * clamped_asin(rho12, clamp_eps));
}

double orthant_p3(double rho12, double rho13, double rho23) {
  Eigen::Matrix3d a;
  a << 1.0, rho12, rho13, rho12, 1.0, rho23, rho13, rho23, 1.0;
  if (std::abs(rho12) > 1.0 + 1e-12 || std::abs(rho13) > 1.0 + 1e-12 || std::abs(rho23) > 1.0 + 1e-12) {
    throw DomainError("correlation entry outside [-1, 1]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(a, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) throw DomainError("3x3 correlation matrix is not positive semidefinite");
  const double s = std::asin(std::clamp(rho12, -1.0, 1.0)) + std::asin(std::clamp(rho13, -1.0, 1.0)) +
                   std::asin(std::clamp(rho23, -1.0, 1.0));
  return std::clamp(0.125 * (1.0 + (2.0 / kPi) * s), 0.0, 1.0);
}

double w_from_p4(double p4, const CorrelationMatrix4& r) { return 16.0 * p4 - 1.0 - (2.0 / kPi) * asin_sum(r); }

double w_integral(const CorrelationMatrix4& r, const QuadratureSettings& settings) {
  settings.validate();
  r.validate();
  const double r12 = r(0, 1), r13 = r(0, 2), r14 = r(0, 3);
  const double r23 = r(1, 2), r24 = r(1, 3), r34 = r(2, 3);
  if (r12 == 0.0 && r13 == 0.0 && r14 == 0.0) return 0.0;

  double p4 = 0.0;
  if (reduce_degenerate(r, p4)) return w_from_p4(p4, r);

  const Radicand b = radicand(r12, r13, r23);
  const Radicand g = radicand(r12, r14, r24);
  const Radicand c = radicand(r13, r14, r34);

  struct Spec {
    double rho1l;
    double a0, a1;
    Radicand first, second;
  };
  const std::array<Spec, 3> specs = {{
      {r12, r34 - r23 * r24, r13 * r14 + r12 * (r12 * r34 - r14 * r23 - r13 * r24), b, g},
      {r13, r24 - r23 * r34, r12 * r14 + r13 * (r13 * r24 - r14 * r23 - r12 * r34), b, c},
      {r14, r23 - r24 * r34, r12 * r13 + r14 * (r14 * r23 - r13 * r24 - r12 * r34), g, c},
  }};

  // Each of the three integrals gets a third of the budget, after the 4/pi^2 factor.
  const double tol = settings.abs_tol / 3.0 * (kPi * kPi / 4.0);
  double total = 0.0;
  for (const auto& s : specs) {
    if (s.rho1l == 0.0) continue;
    // alpha(u) = a0 - a1 u^2 = (a0 - a1) + a1 cos^2
    const ChildsTerm term{s.rho1l,         s.a0 - s.a1,      s.a1, s.first.constant, s.first.coef,
                          s.second.constant, s.second.coef, settings.clamp_eps};
    total += integrate(term, 0.0, kPi / 2.0, tol, settings.max_subdivisions).value;
  }
  return 4.0 / (kPi * kPi) * total;
}

double orthant_p4(const CorrelationMatrix4& r, const QuadratureSettings& settings) {
  settings.validate();
  r.validate();
  double p4 = 0.0;
  if (reduce_degenerate(r, p4)) return p4;
  const double w = w_integral(r, settings);
  return std::clamp((1.0 + (2.0 / kPi) * asin_sum(r) + w) / 16.0, 0.0, 1.0);
}

}  // namespace rankmoments
