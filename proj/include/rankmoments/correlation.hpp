#pragma once

// Sample correlation coefficients: Pearson, Spearman, Kendall, Daniels's
// generalized coefficient, and the indicator-sum (S-statistic) route to
// Spearman's rho.

#include <cstdint>
#include <span>
#include <vector>

namespace rankmoments {

/// n paired observations. Construction validates equal length, n >= 2 and
/// finiteness; ties are allowed in storage and rejected by rank-based code.
class PairedSample {
 public:
  PairedSample(std::vector<double> x, std::vector<double> y);

  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

struct RankVector {
  std::vector<std::int64_t> p;  // ranks of x, a permutation of 1..n
  std::vector<std::int64_t> q;  // ranks of y
};

/// Antisymmetric score matrices a_ij, b_ij stored row-major (n x n).
struct ScoreSystem {
  std::size_t n = 0;
  std::vector<double> a;
  std::vector<double> b;

  double a_at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double b_at(std::size_t i, std::size_t j) const { return b[i * n + j]; }

  static ScoreSystem pearson_scores(const PairedSample& s);
  static ScoreSystem spearman_scores(const RankVector& r);
  static ScoreSystem kendall_scores(const PairedSample& s);
};

/// Integer indicator sums behind Spearman's and Kendall's coefficients.
///   s_value = sum_{i,j,k} H(x_i - x_j) H(y_i - y_k)
///   t_value = sum_{i != j} sgn(x_i - x_j) sgn(y_i - y_j)
/// with s_value = i_term + j_term and
/// t_value = 4 i_term - 2 k_term - 2 l_term + n(n-1).
struct SStatistic {
  std::int64_t s_value = 0;
  std::int64_t t_value = 0;
  std::int64_t i_term = 0;
  std::int64_t j_term = 0;
  std::int64_t k_term = 0;
  std::int64_t l_term = 0;
};

struct SpearmanViaS {
  double value;
  SStatistic stat;
};

struct InequalityFlags {
  bool daniel_ok;
  bool durbin_stuart_ok;
};

/// Ranks 1..n by argsort-of-argsort. Throws TieError on duplicates.
RankVector compute_ranks(const PairedSample& sample);

/// Rank of each element of `v` (1-based). Throws TieError on duplicates.
std::vector<std::int64_t> ranks_of(std::span<const double> v);

double pearson(const PairedSample& sample);
double pearson(std::span<const double> x, std::span<const double> y);

double spearman(const PairedSample& sample);
/// Spearman from ranks already known to be permutations of 1..n.
double spearman_from_ranks(std::span<const std::int64_t> p, std::span<const std::int64_t> q);

/// O(n log n): sorts by x, counts inversions of y with a merge sort.
double kendall(const PairedSample& sample);
/// O(n^2) pair count, kept as the reference for `kendall`.
double kendall_reference(const PairedSample& sample);

/// Kendall's tau from rank vectors that are permutations of 1..n.
double kendall_from_ranks(std::span<const std::int64_t> p, std::span<const std::int64_t> q);

/// Number of discordant pairs of a tie-free sample (inversions of y in x-order).
std::int64_t discordant_pairs(std::span<const double> x, std::span<const double> y);

double daniels_gamma(const ScoreSystem& scores);

/// Spearman's rho via the S-statistic; integer arithmetic throughout so the
/// value is bit-identical to `spearman`.
SpearmanViaS spearman_via_s(const PairedSample& sample);

/// 3n/(n-2) rK - 2(n+1)/(n-2) rS, which lies in [-1, 1] for every tie-free
/// sample with n >= 3 (tight: both ends are attained).
double daniel_statistic(double rs, double rk, std::int64_t n);
/// Same combination with 3(n+2) in place of 3n. Not a valid bound for finite
/// n (the identity permutation gives (n+4)/(n-2)); kept for comparison only.
double daniel_statistic_printed(double rs, double rk, std::int64_t n);
/// Upper bound on rS given rK and n.
double durbin_stuart_bound(double rk, std::int64_t n);

InequalityFlags inequality_check(double rs, double rk, std::int64_t n);

}  // namespace rankmoments
