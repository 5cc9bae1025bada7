#pragma once

// Moments of Pearson's r, Spearman's rho and Kendall's tau for bivariate
// normal samples, including the exact finite-n Var(rS) and Cov(rS, rK).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rankmoments/orthant.hpp"
#include "rankmoments/quadrature.hpp"

namespace rankmoments {

struct BinormalParams {
  double rho = 0.0;

  explicit BinormalParams(double r);
  double s1() const;  // asin(rho)
  double s2() const;  // asin(rho / 2)
};

struct OmegaValues {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double omega4 = 0.0;
};

inline constexpr std::array<char, 12> kPatternLabels = {'c', 'd', 'e', 'f', 'g', 'h', 'l', 'm', 'n', 'o', 'p', 'q'};

/// Index of a pattern label in kPatternLabels; throws DomainError for unknown labels.
std::size_t pattern_index(char label);

/// Correlation matrices of the four standardized differences for each
/// index-sharing pattern. The I-term pair (a, b) contributes X_a - X_b and
/// Y_a - Y_b; the J-term triple (i, j, k) contributes X_i - X_j and Y_i - Y_k.
///
///   c  J(0,1,2) J(0,3,4)     g  I(0,3) J(0,1,2)     l  J(0,1,2) J(1,3,2)
///   d  J(0,1,2) J(3,0,4)     h  I(1,3) J(0,1,2)     m  J(0,1,2) J(3,1,2)
///   e  J(0,1,2) J(3,1,4)     p  I(3,0) J(0,1,2)     n  J(0,1,2) J(1,3,0)
///   f  J(0,1,2) J(3,4,1)     q  I(3,1) J(0,1,2)     o  J(0,1,2) J(3,2,1)
struct PatternMatrixTable {
  double rho = 0.0;
  std::array<CorrelationMatrix4, 12> matrices;
  std::array<double, 12> w_values{};
  bool has_w = false;

  const CorrelationMatrix4& matrix(char label) const { return matrices[pattern_index(label)]; }
  double w(char label) const;
};

/// Builds the twelve matrices. The first call also checks the whole table
/// against its known values at rho = 0 and rho = 1 and throws
/// DerivationError on any mismatch.
PatternMatrixTable derive_pattern_matrices(double rho);

/// derive_pattern_matrices plus W for all twelve patterns.
PatternMatrixTable evaluate_patterns(double rho, const QuadratureSettings& settings = {});

/// Memoized per (rho, settings). rho = +-1 returns the closed-form values.
OmegaValues omegas(double rho, const QuadratureSettings& settings = {});
double omega4(double rho, const QuadratureSettings& settings = {});
void clear_omega_cache();
std::size_t omega_cache_size();

struct Lemma2Moments {
  double mean_rp;
  double var_rp;
  double mean_rs;
  double mean_rs_asymp;
  double mean_rk;
  double var_rk;
};

Lemma2Moments lemma2_moments(double rho, std::int64_t n);

double var_rs_exact(double rho, std::int64_t n, const QuadratureSettings& settings = {});
double var_rs_asymptotic(double rho, std::int64_t n, const QuadratureSettings& settings = {});

/// Omega3 form.
double cov_rs_rk_exact(double rho, std::int64_t n, const QuadratureSettings& settings = {});
/// Same covariance through Omega4.
double cov_rs_rk_corollary(double rho, std::int64_t n, const QuadratureSettings& settings = {});
double cov_rs_rk_asymptotic(double rho, std::int64_t n, const QuadratureSettings& settings = {});

inline constexpr std::array<double, 6> kCovSeriesCoefficients = {1.0,        -1.24858961, 0.06830496,
                                                                 0.07280482, 0.04025528,  0.02189277};
/// (2/(3n)) * sum_k c_k rho^(2k), k = 0..5.
double cov_series_asymptotic(double rho, std::int64_t n);

struct OmegaRow {
  double rho = 0.0;
  OmegaValues values;
  bool ok = false;
  std::string error;  // set when !ok
};

/// One row per grid value, computed in parallel. A failing row keeps its
/// place with ok = false and the error message.
std::vector<OmegaRow> tabulate_omegas(const std::vector<double>& rho_grid, const QuadratureSettings& settings = {});
/// Serial reference for tabulate_omegas.
std::vector<OmegaRow> tabulate_omegas_serial(const std::vector<double>& rho_grid,
                                             const QuadratureSettings& settings = {});

/// CSV "rho,omega1,omega2,omega3" with fixed `precision` decimals and LF
/// line endings. Throws the stored error of the first failed row.
void write_omega_table(std::ostream& out, const std::vector<OmegaRow>& rows, int precision = 10);

/// Fixed-point formatting shared by all CSV writers ("-0.000" becomes "0.000").
std::string format_fixed(double value, int precision);
/// Grid coordinate with at least two and at most twelve decimals ("0.05", "0.125").
std::string format_grid_value(double value);

}  // namespace rankmoments
