#pragma once

// Two-component normal mixture: a fraction epsilon of the pairs comes from a
// scale-inflated component with its own correlation.

#include <array>
#include <cstdint>

#include "rankmoments/correlation.hpp"
#include "rankmoments/random.hpp"

namespace rankmoments {

struct ContaminationParams {
  double epsilon = 0.0;
  double rho = 0.0;
  double rho_prime = 0.0;
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

/// Correlations of the standardized pair and triple differences under each
/// mixture component assignment, with their mixing weights.
///   varrho[0..3]   pairs  (clean,clean) (clean,outlier) (outlier,clean) (outlier,outlier)
///   varrho[4..11]  triples ordered as weights_triple
struct MixtureCorrelations {
  std::array<double, 12> varrho{};
  std::array<double, 4> weights_pair{};
  std::array<double, 8> weights_triple{};
};

MixtureCorrelations mixture_correlations(const ContaminationParams& params);

enum class ExpectationMode { exact, limit };

/// E(rK). Exact mode is the finite-lambda value; limit mode drops the
/// epsilon^2 terms and lets lambda go to infinity.
double expected_rk_contaminated(const ContaminationParams& params, ExpectationMode mode = ExpectationMode::exact);

/// E(rS) at sample size n. Exact mode is the finite-(lambda, n) value; limit
/// mode additionally lets n go to infinity.
double expected_rs_contaminated(const ContaminationParams& params, std::int64_t n,
                                ExpectationMode mode = ExpectationMode::exact);

/// (6/pi) [(1 - eps) asin(rho/2) + eps asin(rho'/2)], a competing claim for
/// the limit of E(rS) kept for comparison.
double rival_formula_star(const ContaminationParams& params);

/// One draw of n pairs from the mixture.
void sample_contaminated(const ContaminationParams& params, std::size_t n, Philox4x32& stream, std::vector<double>& x,
                         std::vector<double>& y);
PairedSample sample_contaminated(const ContaminationParams& params, std::size_t n, std::uint64_t seed);

}  // namespace rankmoments
