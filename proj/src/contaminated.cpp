#include "rankmoments/contaminated.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

constexpr double kPi = std::numbers::pi;

// Sheppard: P(U > 0, V > 0) for a standard pair with correlation r.
double quadrant(double r) { return 0.25 + std::asin(std::clamp(r, -1.0, 1.0)) / (2.0 * kPi); }

}  // namespace

void ContaminationParams::validate() const {
  auto fail = [](const char* what, double v) {
    std::ostringstream msg;
    msg << what << " = " << v << " is out of range";
    throw DomainError(msg.str());
  };
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon", epsilon);
  if (!(std::abs(rho) <= 1.0)) fail("rho", rho);
  if (!(std::abs(rho_prime) <= 1.0)) fail("rho_prime", rho_prime);
  if (!(lambda_x > 0.0 && std::isfinite(lambda_x))) fail("lambda_x", lambda_x);
  if (!(lambda_y > 0.0 && std::isfinite(lambda_y))) fail("lambda_y", lambda_y);
  if (!(sigma_x > 0.0 && std::isfinite(sigma_x))) fail("sigma_x", sigma_x);
  if (!(sigma_y > 0.0 && std::isfinite(sigma_y))) fail("sigma_y", sigma_y);
  if (!std::isfinite(mu_x)) fail("mu_x", mu_x);
  if (!std::isfinite(mu_y)) fail("mu_y", mu_y);
}

MixtureCorrelations mixture_correlations(const ContaminationParams& p) {
  p.validate();
  const double e = p.epsilon, eb = 1.0 - p.epsilon;
  const double rho = p.rho, rp = p.rho_prime;
  const double lx = p.lambda_x, ly = p.lambda_y;
  const double ax = std::sqrt(1.0 + lx * lx), ay = std::sqrt(1.0 + ly * ly);
  const double r2 = std::sqrt(2.0);

  MixtureCorrelations m;
  m.varrho = {
      rho,
      (rho + lx * ly * rp) / (ax * ay),
      (rho + lx * ly * rp) / (ax * ay),
      rp,
      rho / 2.0,
      rho / (r2 * ay),
      rho / (r2 * ax),
      lx * ly * rp / (ax * ay),
      rho / (ax * ay),
      lx * rp / (r2 * ax),
      ly * rp / (r2 * ay),
      rp / 2.0,
  };
  m.weights_pair = {eb * eb, e * eb, e * eb, e * e};
  m.weights_triple = {eb * eb * eb, e * eb * eb, e * eb * eb, e * eb * eb, e * e * eb, e * e * eb, e * e * eb, e * e * e};
  return m;
}

double expected_rk_contaminated(const ContaminationParams& p, ExpectationMode mode) {
  p.validate();
  if (mode == ExpectationMode::limit) {
    return 2.0 / kPi * ((1.0 - 2.0 * p.epsilon) * std::asin(p.rho) + 2.0 * p.epsilon * std::asin(p.rho_prime));
  }
  const auto m = mixture_correlations(p);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += m.weights_pair[i] * std::asin(m.varrho[i]);
  return 2.0 / kPi * s;
}

double expected_rs_contaminated(const ContaminationParams& p, std::int64_t n, ExpectationMode mode) {
  p.validate();
  if (n < 2) throw SizeError("n must be at least 2");
  if (mode == ExpectationMode::limit) {
    return 6.0 / kPi * ((1.0 - 3.0 * p.epsilon) * std::asin(p.rho / 2.0) + p.epsilon * std::asin(p.rho_prime));
  }
  const auto m = mixture_correlations(p);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) e1 += m.weights_pair[i] * quadrant(m.varrho[i]);
  for (std::size_t k = 0; k < 8; ++k) e2 += m.weights_triple[k] * quadrant(m.varrho[4 + k]);
  const double nn = static_cast<double>(n);
  const double es = nn * (nn - 1.0) * e1 + nn * (nn - 1.0) * (nn - 2.0) * e2;
  return (12.0 * es - 3.0 * nn * (nn - 1.0) * (nn - 1.0)) / (nn * (nn * nn - 1.0));
}

double rival_formula_star(const ContaminationParams& p) {
  p.validate();
  return 6.0 / kPi * ((1.0 - p.epsilon) * std::asin(p.rho / 2.0) + p.epsilon * std::asin(p.rho_prime / 2.0));
}

void sample_contaminated(const ContaminationParams& p, std::size_t n, Philox4x32& stream, std::vector<double>& x,
                         std::vector<double>& y) {
  std::bernoulli_distribution outlier(p.epsilon);
  std::normal_distribution<double> normal;
  const double c_clean = std::sqrt(1.0 - p.rho * p.rho);
  const double c_out = std::sqrt(1.0 - p.rho_prime * p.rho_prime);
  x.resize(n);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool out = outlier(stream);
    const double z1 = normal(stream);
    const double z2 = normal(stream);
    if (out) {
      x[i] = p.mu_x + p.sigma_x * p.lambda_x * z1;
      y[i] = p.mu_y + p.sigma_y * p.lambda_y * (p.rho_prime * z1 + c_out * z2);
    } else {
      x[i] = p.mu_x + p.sigma_x * z1;
      y[i] = p.mu_y + p.sigma_y * (p.rho * z1 + c_clean * z2);
    }
  }
}

PairedSample sample_contaminated(const ContaminationParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  if (n < 2) throw SizeError("a paired sample needs n >= 2");
  Philox4x32 stream(seed);
  std::vector<double> x, y;
  sample_contaminated(p, n, stream, x, y);
  return PairedSample(std::move(x), std::move(y));
}

}  // namespace rankmoments
