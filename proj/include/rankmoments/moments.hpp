#pragma once

// Mergeable central-moment sums. S_pq = sum (x - mean_x)^p (y - mean_y)^q for
// p <= P, q <= Q; two partial summaries combine exactly (up to rounding) with
// the binomial update, and a single observation is a merge with a count-one
// summary. Order of merges fixes the floating-point result.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace rankmoments {

template <std::size_t P, std::size_t Q>
class CentralSums {
 public:
  void add(double x, double y = 0.0) {
    CentralSums one;
    one.s_[0][0] = 1.0;
    one.mx_ = x;
    one.my_ = y;
    merge(one);
  }

  void merge(const CentralSums& b) {
    if (b.s_[0][0] == 0.0) return;
    if (s_[0][0] == 0.0) {
      *this = b;
      return;
    }
    const double na = s_[0][0], nb = b.s_[0][0], n = na + nb;
    const double dx = b.mx_ - mx_, dy = b.my_ - my_;
    // Shifts of each part's mean to the combined mean.
    const double ax = -nb * dx / n, ay = -nb * dy / n;
    const double bx = na * dx / n, by = na * dy / n;
    std::array<double, P + 1> pax{}, pbx{};
    std::array<double, Q + 1> pay{}, pby{};
    pax[0] = pbx[0] = pay[0] = pby[0] = 1.0;
    for (std::size_t k = 1; k <= P; ++k) {
      pax[k] = pax[k - 1] * ax;
      pbx[k] = pbx[k - 1] * bx;
    }
    for (std::size_t k = 1; k <= Q; ++k) {
      pay[k] = pay[k - 1] * ay;
      pby[k] = pby[k - 1] * by;
    }
    Table out{};
    for (std::size_t p = 0; p <= P; ++p) {
      for (std::size_t q = 0; q <= Q; ++q) {
        double v = 0.0;
        for (std::size_t i = 0; i <= p; ++i) {
          for (std::size_t j = 0; j <= q; ++j) {
            const double c = binom(p, i) * binom(q, j);
            v += c * (s_[i][j] * pax[p - i] * pay[q - j] + b.s_[i][j] * pbx[p - i] * pby[q - j]);
          }
        }
        out[p][q] = v;
      }
    }
    out[0][0] = n;
    if constexpr (P >= 1) out[1][0] = 0.0;
    if constexpr (Q >= 1) out[0][1] = 0.0;
    s_ = out;
    mx_ += nb * dx / n;
    my_ += nb * dy / n;
  }

  std::uint64_t count() const { return static_cast<std::uint64_t>(s_[0][0]); }
  double mean_x() const { return mx_; }
  double mean_y() const { return my_; }
  double sum(std::size_t p, std::size_t q = 0) const { return s_[p][q]; }
  /// Central moment S_pq / N.
  double moment(std::size_t p, std::size_t q = 0) const { return s_[0][0] > 0 ? s_[p][q] / s_[0][0] : 0.0; }

 private:
  using Table = std::array<std::array<double, Q + 1>, P + 1>;

  static constexpr double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
  }

  Table s_{};
  double mx_ = 0.0;
  double my_ = 0.0;
};

/// Univariate summary up to the fourth central moment.
class Moments : public CentralSums<4, 0> {
 public:
  double mean() const { return mean_x(); }
  /// Plug-in variance (divisor N).
  double variance() const { return moment(2); }
  double se_mean() const { return count() > 1 ? std::sqrt(variance() / static_cast<double>(count())) : 0.0; }
  /// Delta-method standard error of the plug-in variance.
  double se_variance() const {
    const double m2 = moment(2);
    return count() > 1 ? std::sqrt(std::max(0.0, moment(4) - m2 * m2) / static_cast<double>(count())) : 0.0;
  }
  /// Mean of the squared raw values.
  double mean_square() const { return variance() + mean() * mean(); }
  double se_mean_square() const {
    if (count() < 2) return 0.0;
    const double mu = mean(), m2 = moment(2), m3 = moment(3), m4 = moment(4);
    const double e2 = m2 + mu * mu;
    const double e4 = m4 + 4.0 * mu * m3 + 6.0 * mu * mu * m2 + mu * mu * mu * mu;
    return std::sqrt(std::max(0.0, e4 - e2 * e2) / static_cast<double>(count()));
  }
};

/// Bivariate summary up to S_22, enough for the covariance and its error.
class CoMoments : public CentralSums<2, 2> {
 public:
  double covariance() const { return moment(1, 1); }
  double se_covariance() const {
    if (count() < 2) return 0.0;
    const double c = covariance();
    return std::sqrt(std::max(0.0, moment(2, 2) - c * c) / static_cast<double>(count()));
  }
};

}  // namespace rankmoments
