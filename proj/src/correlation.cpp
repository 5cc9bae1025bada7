#include "rankmoments/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

std::vector<std::size_t> argsort(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

void require_size(std::size_t n) {
  if (n < 2) throw SizeError("sample size must be at least 2, got " + std::to_string(n));
}

// Merge-sort inversion count; `buf` is scratch of the same length.
std::int64_t count_inversions(std::vector<std::int64_t>& a, std::vector<std::int64_t>& buf,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = count_inversions(a, buf, lo, mid) + count_inversions(a, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      buf[k++] = a[j++];
    } else {
      buf[k++] = a[i++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            a.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

// Sum of squared rank differences, exact in integers.
std::int64_t squared_rank_distance(std::span<const std::int64_t> p, std::span<const std::int64_t> q) {
  std::int64_t d2 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::int64_t d = p[i] - q[i];
    d2 += d * d;
  }
  return d2;
}

double gamma_from_sums(double ab, double aa, double bb) {
  if (aa == 0.0 || bb == 0.0) throw DegenerateError("score matrix is identically zero");
  return ab / std::sqrt(aa * bb);
}

}  // namespace

PairedSample::PairedSample(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw SizeError("x and y differ in length (" + std::to_string(x_.size()) + " vs " +
                    std::to_string(y_.size()) + ")");
  }
  require_size(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw DomainError("non-finite value at row " + std::to_string(i));
    }
  }
}

std::vector<std::int64_t> ranks_of(std::span<const double> v) {
  const auto order = argsort(v);
  std::vector<std::int64_t> rank(v.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && v[order[k]] == v[order[k - 1]]) {
      std::ostringstream msg;
      msg << "tied value " << v[order[k]] << " at positions " << order[k - 1] << " and " << order[k];
      throw TieError(msg.str());
    }
    rank[order[k]] = static_cast<std::int64_t>(k) + 1;
  }
  return rank;
}

RankVector compute_ranks(const PairedSample& sample) {
  require_size(sample.size());
  return RankVector{ranks_of(sample.x()), ranks_of(sample.y())};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  require_size(n);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateError("pearson: a coordinate is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const PairedSample& sample) { return pearson(sample.x(), sample.y()); }

double spearman_from_ranks(std::span<const std::int64_t> p, std::span<const std::int64_t> q) {
  const auto n = static_cast<std::int64_t>(p.size());
  const std::int64_t denom = n * (n * n - 1);
  // 1 - 6 D / N written as a single integer numerator so it matches the S route bit for bit.
  return static_cast<double>(denom - 6 * squared_rank_distance(p, q)) / static_cast<double>(denom);
}

double spearman(const PairedSample& sample) {
  const auto r = compute_ranks(sample);
  return spearman_from_ranks(r.p, r.q);
}

std::int64_t discordant_pairs(std::span<const double> x, std::span<const double> y) {
  const auto order = argsort(x);
  const auto qy = ranks_of(y);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (x[order[k]] == x[order[k - 1]]) throw TieError("tied x value " + std::to_string(x[order[k]]));
  }
  std::vector<std::int64_t> seq(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) seq[k] = qy[order[k]];
  std::vector<std::int64_t> buf(seq.size());
  return count_inversions(seq, buf, 0, seq.size());
}

double kendall(const PairedSample& sample) {
  const auto n = static_cast<std::int64_t>(sample.size());
  require_size(sample.size());
  const std::int64_t pairs = n * (n - 1) / 2;
  const std::int64_t disc = discordant_pairs(sample.x(), sample.y());
  return static_cast<double>(pairs - 2 * disc) / static_cast<double>(pairs);
}

double kendall_from_ranks(std::span<const std::int64_t> p, std::span<const std::int64_t> q) {
  const auto n = static_cast<std::int64_t>(p.size());
  require_size(p.size());
  std::vector<std::int64_t> seq(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) seq[static_cast<std::size_t>(p[i] - 1)] = q[i];
  std::vector<std::int64_t> buf(seq.size());
  const std::int64_t disc = count_inversions(seq, buf, 0, seq.size());
  const std::int64_t pairs = n * (n - 1) / 2;
  return static_cast<double>(pairs - 2 * disc) / static_cast<double>(pairs);
}

double kendall_reference(const PairedSample& sample) {
  const std::size_t n = sample.size();
  compute_ranks(sample);  // tie check
  const auto x = sample.x();
  const auto y = sample.y();
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const int sx = (x[i] > x[j]) - (x[i] < x[j]);
      const int sy = (y[i] > y[j]) - (y[i] < y[j]);
      t += sx * sy;
    }
  }
  return static_cast<double>(t) / static_cast<double>(n * (n - 1));
}

ScoreSystem ScoreSystem::pearson_scores(const PairedSample& s) {
  const std::size_t n = s.size();
  ScoreSystem sc{n, std::vector<double>(n * n), std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sc.a[i * n + j] = s.x()[j] - s.x()[i];
      sc.b[i * n + j] = s.y()[j] - s.y()[i];
    }
  }
  return sc;
}

ScoreSystem ScoreSystem::spearman_scores(const RankVector& r) {
  const std::size_t n = r.p.size();
  ScoreSystem sc{n, std::vector<double>(n * n), std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sc.a[i * n + j] = static_cast<double>(r.p[j] - r.p[i]);
      sc.b[i * n + j] = static_cast<double>(r.q[j] - r.q[i]);
    }
  }
  return sc;
}

ScoreSystem ScoreSystem::kendall_scores(const PairedSample& s) {
  const std::size_t n = s.size();
  ScoreSystem sc{n, std::vector<double>(n * n), std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = s.x()[j] - s.x()[i];
      const double dy = s.y()[j] - s.y()[i];
      sc.a[i * n + j] = static_cast<double>((dx > 0) - (dx < 0));
      sc.b[i * n + j] = static_cast<double>((dy > 0) - (dy < 0));
    }
  }
  return sc;
}

double daniels_gamma(const ScoreSystem& scores) {
  const std::size_t n = scores.n;
  if (scores.a.size() != n * n || scores.b.size() != n * n) throw SizeError("score matrices must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (scores.a_at(i, j) != -scores.a_at(j, i) || scores.b_at(i, j) != -scores.b_at(j, i)) {
        throw DomainError("score matrices must be antisymmetric");
      }
    }
  }
  // Integer-valued scores (ranks, signs) are summed exactly when they fit in int64.
  bool integral = true;
  for (std::size_t k = 0; k < n * n && integral; ++k) {
    integral = std::abs(scores.a[k]) < 1e6 && std::abs(scores.b[k]) < 1e6 &&
               scores.a[k] == std::trunc(scores.a[k]) && scores.b[k] == std::trunc(scores.b[k]);
  }
  if (integral) {
    std::int64_t ab = 0, aa = 0, bb = 0;
    for (std::size_t k = 0; k < n * n; ++k) {
      const auto a = static_cast<std::int64_t>(scores.a[k]);
      const auto b = static_cast<std::int64_t>(scores.b[k]);
      ab += a * b;
      aa += a * a;
      bb += b * b;
    }
    if (aa == 0 || bb == 0) throw DegenerateError("score matrix is identically zero");
    if (aa == bb) return static_cast<double>(ab) / static_cast<double>(aa);
    return gamma_from_sums(static_cast<double>(ab), static_cast<double>(aa), static_cast<double>(bb));
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    ab += scores.a[k] * scores.b[k];
    aa += scores.a[k] * scores.a[k];
    bb += scores.b[k] * scores.b[k];
  }
  return gamma_from_sums(ab, aa, bb);
}

SpearmanViaS spearman_via_s(const PairedSample& sample) {
  const auto r = compute_ranks(sample);
  const auto n = static_cast<std::int64_t>(sample.size());

  // sum_j H(x_i - x_j) = p_i - 1, so the triple sum collapses to a dot product.
  SStatistic st;
  for (std::size_t i = 0; i < r.p.size(); ++i) st.s_value += (r.p[i] - 1) * (r.q[i] - 1);

  const std::int64_t pairs = n * (n - 1) / 2;
  const std::int64_t concordant = pairs - discordant_pairs(sample.x(), sample.y());
  st.i_term = concordant;  // ordered (i, j) with x_i > x_j and y_i > y_j
  st.j_term = st.s_value - st.i_term;
  st.k_term = pairs;
  st.l_term = pairs;
  st.t_value = 4 * st.i_term - 2 * st.k_term - 2 * st.l_term + n * (n - 1);

  const std::int64_t denom = n * (n * n - 1);
  const double value = static_cast<double>(12 * st.s_value - 3 * n * (n - 1) * (n - 1)) / static_cast<double>(denom);
  return {value, st};
}

double daniel_statistic(double rs, double rk, std::int64_t n) {
  const double m = static_cast<double>(n);
  return 3.0 * m / (m - 2.0) * rk - 2.0 * (m + 1.0) / (m - 2.0) * rs;
}

double daniel_statistic_printed(double rs, double rk, std::int64_t n) {
  const double m = static_cast<double>(n);
  return 3.0 * (m + 2.0) / (m - 2.0) * rk - 2.0 * (m + 1.0) / (m - 2.0) * rs;
}

double durbin_stuart_bound(double rk, std::int64_t n) {
  const double m = static_cast<double>(n);
  return 1.0 - (1.0 - rk) * ((m - 1.0) * (1.0 - rk) + 4.0) / (2.0 * (m + 1.0));
}

InequalityFlags inequality_check(double rs, double rk, std::int64_t n) {
  if (n < 3) return {false, false};
  // Both bounds are attained with equality by real samples; allow for rounding in rs, rk.
  constexpr double slack = 1e-12;
  const double d = daniel_statistic(rs, rk, n);
  return {d >= -1.0 - slack && d <= 1.0 + slack, rs <= durbin_stuart_bound(rk, n) + slack};
}

}  // namespace rankmoments
