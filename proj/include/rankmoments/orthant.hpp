#pragma once

// Positive-orthant probabilities of zero-mean normal vectors in dimensions
// 2, 3 and 4. The quadrivariate case goes through the W-term, a sum of three
// one-dimensional arcsine integrals evaluated by adaptive quadrature.

#include <array>

#include "rankmoments/quadrature.hpp"

namespace rankmoments {

/// Symmetric 4x4 correlation matrix, stored row-major.
class CorrelationMatrix4 {
 public:
  CorrelationMatrix4();  // identity
  explicit CorrelationMatrix4(const std::array<double, 16>& entries);

  static CorrelationMatrix4 from_upper(double r12, double r13, double r14, double r23, double r24, double r34);

  double operator()(std::size_t i, std::size_t j) const { return m_[i * 4 + j]; }
  void set(std::size_t i, std::size_t j, double v);

  /// Smallest eigenvalue of the matrix.
  double min_eigenvalue() const;

  /// Throws DomainError unless the matrix is symmetric, unit-diagonal, has
  /// |entries| <= 1 and smallest eigenvalue >= -psd_tol.
  void validate(double psd_tol = 1e-10) const;

  /// Simultaneous row/column permutation: result(i, j) = this(perm[i], perm[j]).
  CorrelationMatrix4 permuted(const std::array<std::size_t, 4>& perm) const;

  const std::array<double, 16>& entries() const { return m_; }

 private:
  std::array<double, 16> m_;
};

double orthant_p2(double rho12, double clamp_eps = 1e-10);
double orthant_p3(double rho12, double rho13, double rho23);

/// W-term by the one-dimensional reduction; 0 for the identity without
/// quadrature. Matrices with an entry of exactly +-1 are reduced to lower
/// dimension first.
double w_integral(const CorrelationMatrix4& r, const QuadratureSettings& settings = {});

/// (1 + (2/pi) sum_{r<s} asin rho_rs + W) / 16, clamped to [0, 1].
double orthant_p4(const CorrelationMatrix4& r, const QuadratureSettings& settings = {});

/// Inverse of the P4 relation: W = 16 p4 - 1 - (2/pi) sum_{r<s} asin rho_rs.
double w_from_p4(double p4, const CorrelationMatrix4& r);

}  // namespace rankmoments
