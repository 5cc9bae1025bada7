#include "rankmoments/binormal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

// A standardized difference V_a - V_b of one coordinate (0 = X, 1 = Y).
struct Diff {
  int var;
  int a;
  int b;
};

double diff_corr(const Diff& u, const Diff& v, double rho) {
  const int k = (u.a == v.a) - (u.a == v.b) - (u.b == v.a) + (u.b == v.b);
  return 0.5 * k * (u.var == v.var ? 1.0 : rho);
}

std::array<Diff, 2> i_term(int a, int b) { return {{{0, a, b}, {1, a, b}}}; }
std::array<Diff, 2> j_term(int i, int j, int k) { return {{{0, i, j}, {1, i, k}}}; }

CorrelationMatrix4 build(const std::array<Diff, 2>& first, const std::array<Diff, 2>& second, double rho) {
  const std::array<Diff, 4> d = {first[0], first[1], second[0], second[1]};
  CorrelationMatrix4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) r.set(i, j, diff_corr(d[i], d[j], rho));
  return r;
}

std::array<CorrelationMatrix4, 12> build_all(double rho) {
  const auto base = j_term(0, 1, 2);
  return {
      build(base, j_term(0, 3, 4), rho),  // c
      build(base, j_term(3, 0, 4), rho),  // d
      build(base, j_term(3, 1, 4), rho),  // e
      build(base, j_term(3, 4, 1), rho),  // f
      build(i_term(0, 3), base, rho),     // g
      build(i_term(1, 3), base, rho),     // h
      build(base, j_term(1, 3, 2), rho),  // l
      build(base, j_term(3, 1, 2), rho),  // m
      build(base, j_term(1, 3, 0), rho),  // n
      build(base, j_term(3, 2, 1), rho),  // o
      build(i_term(3, 0), base, rho),     // p
      build(i_term(3, 1), base, rho),     // q
  };
}

// Known W at rho = +-1, in kPatternLabels order.
constexpr std::array<double, 12> kWAtOne = {1.0 / 5,  1.0 / 15, 2.0 / 15, 2.0 / 15, 1.0 / 3, 1.0 / 3,
                                            0.0,      1.0 / 3,  0.0,      1.0 / 3,  1.0 / 3, 1.0 / 3};

// Known P4 at rho = 0 for the labels that have one.
constexpr std::array<std::pair<char, double>, 8> kP4AtZero = {{{'c', 1.0 / 9},
                                                               {'g', 1.0 / 9},
                                                               {'d', 1.0 / 24},
                                                               {'h', 1.0 / 24},
                                                               {'f', 1.0 / 16},
                                                               {'o', 1.0 / 16},
                                                               {'l', 1.0 / 18},
                                                               {'n', 1.0 / 36}}};

void verify_anchors() {
  const QuadratureSettings settings;
  constexpr double tol = 1e-9;
  const auto at_zero = build_all(0.0);
  for (const auto& [label, expected] : kP4AtZero) {
    const double got = orthant_p4(at_zero[pattern_index(label)], settings);
    if (std::abs(got - expected) > tol) {
      std::ostringstream msg;
      msg << "pattern " << label << " at rho=0: P4 = " << got << ", expected " << expected;
      throw DerivationError(msg.str());
    }
  }
  const auto at_one = build_all(1.0);
  for (std::size_t k = 0; k < 12; ++k) {
    at_one[k].validate();
    const double got = w_integral(at_one[k], settings);
    if (std::abs(got - kWAtOne[k]) > tol) {
      std::ostringstream msg;
      msg << "pattern " << kPatternLabels[k] << " at rho=1: W = " << got << ", expected " << kWAtOne[k];
      throw DerivationError(msg.str());
    }
  }
}

void check_rho(double rho) {
  if (!std::isfinite(rho) || std::abs(rho) > 1.0) {
    std::ostringstream msg;
    msg << "rho = " << rho << " outside [-1, 1]";
    throw DomainError(msg.str());
  }
}

void check_n(std::int64_t n, std::int64_t min_n) {
  if (n < min_n) throw SizeError("n = " + std::to_string(n) + " below the minimum " + std::to_string(min_n));
}

using CacheKey = std::tuple<double, double, std::size_t, double>;

struct OmegaCache {
  std::shared_mutex mutex;
  std::map<CacheKey, OmegaValues> values;
};

OmegaCache& cache() {
  static OmegaCache c;
  return c;
}

OmegaValues compute_omegas(double rho, const QuadratureSettings& settings) {
  if (std::abs(rho) == 1.0) return {1.0, 16.0 / 3.0, 0.5, 2.0 * kPi2 / 9.0};
  const auto table = derive_pattern_matrices(rho);
  auto w = [&](char label) { return w_integral(table.matrix(label), settings); };
  const double wc = w('c'), wd = w('d'), wf = w('f');
  const double wg = w('g'), wh = w('h'), wl = w('l'), wn = w('n'), wo = w('o');
  OmegaValues out;
  out.omega1 = wc + 8.0 * wd + 2.0 * wf;
  out.omega2 = 6.0 * wg + 8.0 * wh + 6.0 * wl + 2.0 * wn + wo + 1.0 / 3.0;
  out.omega3 = 0.5 * wg + wh;
  out.omega4 = omega4(rho, settings);
  return out;
}

std::vector<OmegaRow> tabulate(const std::vector<double>& grid, const QuadratureSettings& settings, bool parallel) {
  std::vector<OmegaRow> rows(grid.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  auto fill = [&](std::ptrdiff_t i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.rho = grid[static_cast<std::size_t>(i)];
    try {
      if (row.rho < 0.0 || row.rho > 1.0) throw DomainError("table grid values must lie in [0, 1]");
      row.values = omegas(row.rho, settings);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) fill(i);
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) fill(i);
  }
  return rows;
}

}  // namespace

BinormalParams::BinormalParams(double r) : rho(r) { check_rho(r); }
double BinormalParams::s1() const { return std::asin(rho); }
double BinormalParams::s2() const { return std::asin(rho / 2.0); }

std::size_t pattern_index(char label) {
  const auto it = std::find(kPatternLabels.begin(), kPatternLabels.end(), label);
  if (it == kPatternLabels.end()) throw DomainError(std::string("unknown pattern label '") + label + "'");
  return static_cast<std::size_t>(it - kPatternLabels.begin());
}

double PatternMatrixTable::w(char label) const {
  if (!has_w) throw DomainError("pattern table was built without W values");
  return w_values[pattern_index(label)];
}

PatternMatrixTable derive_pattern_matrices(double rho) {
  check_rho(rho);
  static std::once_flag verified;
  std::call_once(verified, verify_anchors);
  PatternMatrixTable t;
  t.rho = rho;
  t.matrices = build_all(rho);
  return t;
}

PatternMatrixTable evaluate_patterns(double rho, const QuadratureSettings& settings) {
  auto t = derive_pattern_matrices(rho);
  for (std::size_t k = 0; k < 12; ++k) {
    t.w_values[k] = std::abs(rho) == 1.0 ? kWAtOne[k] : w_integral(t.matrices[k], settings);
  }
  t.has_w = true;
  return t;
}

OmegaValues omegas(double rho, const QuadratureSettings& settings) {
  check_rho(rho);
  settings.validate();
  const CacheKey key{rho, settings.abs_tol, settings.max_subdivisions, settings.clamp_eps};
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (auto it = c.values.find(key); it != c.values.end()) return it->second;
  }
  const OmegaValues v = compute_omegas(rho, settings);
  std::unique_lock lock(c.mutex);
  return c.values.emplace(key, v).first->second;
}

void clear_omega_cache() {
  auto& c = cache();
  std::unique_lock lock(c.mutex);
  c.values.clear();
}

std::size_t omega_cache_size() {
  auto& c = cache();
  std::shared_lock lock(c.mutex);
  return c.values.size();
}

double omega4(double rho, const QuadratureSettings& settings) {
  check_rho(rho);
  settings.validate();
  if (rho == 0.0) return 0.0;
  if (std::abs(rho) == 1.0) return 2.0 * kPi2 / 9.0;

  // x = sin(theta) in every integral; dx / sqrt(1 - x^2) = dtheta.
  const double top = std::asin(rho);
  const double tol = settings.abs_tol / 5.0;
  const std::size_t maxsub = settings.max_subdivisions;
  auto over_root4 = [](double s, double c) { return c / std::sqrt(4.0 - s * s); };

  const double i1 = integrate(
      [](double t) {
        const double s = std::sin(t);
        return std::asin(s / 3.0) + 2.0 * std::asin(s / std::sqrt(3.0));
      },
      0.0, top, tol, maxsub).value;
  const double i2 = integrate(
      [&](double t) {
        const double s = std::sin(t), c = std::cos(t);
        return std::asin(0.5 * s * std::sqrt(c * c / (9.0 - 3.0 * s * s))) * over_root4(s, c);
      },
      0.0, top, tol, maxsub).value;
  const double i3 = integrate(
      [&](double t) {
        const double s = std::sin(t), c = std::cos(t);
        const double arg = 0.5 * s * (5.0 - s * s) / (3.0 - s * s);
        return std::asin(std::clamp(arg, -1.0, 1.0)) * over_root4(s, c);
      },
      0.0, top, tol, maxsub).value;
  const double i4 = integrate(
      [&](double t) {
        const double s = std::sin(t), c = std::cos(t);
        return std::asin(s * std::sqrt(c * c / (12.0 - 6.0 * s * s))) * over_root4(s, c);
      },
      0.0, top, tol, maxsub).value;
  const double i5 = integrate(
      [&](double t) {
        const double s = std::sin(t), c = std::cos(t);
        const double arg = s * std::sqrt((3.0 - s * s) / (4.0 - 2.0 * s * s));
        return std::asin(std::clamp(arg, -1.0, 1.0)) * over_root4(s, c);
      },
      0.0, top, tol, maxsub).value;
  return i1 - 2.0 * i2 + i3 - 2.0 * i4 + 2.0 * i5;
}

Lemma2Moments lemma2_moments(double rho, std::int64_t n) {
  check_n(n, 2);
  const BinormalParams p(rho);
  const double s1 = p.s1(), s2 = p.s2();
  const double m = static_cast<double>(n);
  Lemma2Moments out{};
  out.mean_rp = rho * (1.0 - (1.0 - rho * rho) / (2.0 * m));
  out.var_rp = (1.0 - rho * rho) * (1.0 - rho * rho) / (m - 1.0);
  out.mean_rs = 6.0 / (kPi * (m + 1.0)) * (s1 + (m - 2.0) * s2);
  out.mean_rs_asymp = 6.0 / kPi * s2;
  out.mean_rk = 2.0 / kPi * s1;
  out.var_rk = 2.0 / (m * (m - 1.0)) *
               (1.0 - 4.0 * s1 * s1 / kPi2 + 2.0 * (m - 2.0) * (1.0 / 9.0 - 4.0 * s2 * s2 / kPi2));
  return out;
}

double var_rs_exact(double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_n(n, 4);
  const BinormalParams p(rho);
  const OmegaValues o = omegas(rho, settings);
  const double s1 = p.s1(), s2 = p.s2();
  const double m = static_cast<double>(n);
  const double d = m * (m * m - 1.0) * (m + 1.0);
  const double v = 6.0 / (m * (m + 1.0)) + 9.0 * (m - 2.0) * (m - 3.0) / d * ((m - 4.0) * o.omega1 + o.omega2) -
                   36.0 / (kPi2 * d) *
                       (3.0 * (m - 2.0) * (3.0 * m * m - 15.0 * m + 22.0) * s2 * s2 +
                        12.0 * (m - 2.0) * (m - 2.0) * s1 * s2 - 2.0 * (m - 3.0) * s1 * s1);
  if (v < -1e-10) {
    std::ostringstream msg;
    msg << "Var(rS) evaluated to " << v << " at rho=" << rho << ", n=" << n;
    throw NegativeVarianceError(msg.str());
  }
  return std::max(v, 0.0);
}

double var_rs_asymptotic(double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_n(n, 1);
  const BinormalParams p(rho);
  const double s2 = p.s2();
  const double v = (9.0 * omegas(rho, settings).omega1 - 324.0 * s2 * s2 / kPi2) / static_cast<double>(n);
  if (v < -1e-10) throw NegativeVarianceError("asymptotic Var(rS) is negative");
  return std::max(v, 0.0);
}

double cov_rs_rk_exact(double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_n(n, 4);
  const BinormalParams p(rho);
  const double s1 = p.s1(), s2 = p.s2();
  const double m = static_cast<double>(n);
  const double o3 = omegas(rho, settings).omega3;
  return 12.0 / (m * (m * m - 1.0)) *
         ((7.0 * m - 5.0) / 18.0 + (m - 4.0) * s1 * s1 / kPi2 - 5.0 * (m - 2.0) * s2 * s2 / kPi2 -
          6.0 * (m - 2.0) * (m - 2.0) * s1 * s2 / kPi2 + (m - 2.0) * (m - 3.0) * o3);
}

double cov_rs_rk_corollary(double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_n(n, 4);
  const BinormalParams p(rho);
  const double s1 = p.s1(), s2 = p.s2();
  const double m = static_cast<double>(n);
  const double o4 = omegas(rho, settings).omega4;
  return 12.0 / (m * (m * m - 1.0)) *
         ((m + 1.0) * (m + 1.0) / 18.0 + (m - 4.0) * s1 * s1 / kPi2 - 5.0 * (m - 2.0) * s2 * s2 / kPi2 -
          6.0 * (m - 2.0) * (m - 2.0) * s1 * s2 / kPi2 + 2.0 / kPi2 * (m - 2.0) * (m - 3.0) * o4);
}

double cov_rs_rk_asymptotic(double rho, std::int64_t n, const QuadratureSettings& settings) {
  check_n(n, 1);
  const BinormalParams p(rho);
  return 12.0 / static_cast<double>(n) * (omegas(rho, settings).omega3 - 6.0 * p.s1() * p.s2() / kPi2);
}

double cov_series_asymptotic(double rho, std::int64_t n) {
  check_n(n, 1);
  const double r2 = rho * rho;
  double sum = 0.0;
  double power = 1.0;
  for (double c : kCovSeriesCoefficients) {
    sum += c * power;
    power *= r2;
  }
  return 2.0 / (3.0 * static_cast<double>(n)) * sum;
}

std::vector<OmegaRow> tabulate_omegas(const std::vector<double>& rho_grid, const QuadratureSettings& settings) {
  // Anchor check once up front so worker threads never race on it.
  derive_pattern_matrices(0.0);
  return tabulate(rho_grid, settings, true);
}

std::vector<OmegaRow> tabulate_omegas_serial(const std::vector<double>& rho_grid,
                                             const QuadratureSettings& settings) {
  return tabulate(rho_grid, settings, false);
}

std::string format_fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_grid_value(double value) {
  std::string s = format_fixed(value, 12);
  const auto dot = s.find('.');
  std::size_t end = s.find_last_not_of('0');
  end = std::max(end, dot + 2);
  s.erase(end + 1);
  return s;
}

void write_omega_table(std::ostream& out, const std::vector<OmegaRow>& rows, int precision) {
  for (const auto& row : rows) {
    if (!row.ok) {
      std::ostringstream msg;
      msg << "rho=" << format_fixed(row.rho, 12) << ": " << row.error;
      throw ConvergenceError(msg.str());
    }
  }
  out << "rho,omega1,omega2,omega3\n";
  for (const auto& row : rows) {
    out << format_grid_value(row.rho) << ',' << format_fixed(row.values.omega1, precision) << ','
        << format_fixed(row.values.omega2, precision) << ',' << format_fixed(row.values.omega3, precision) << '\n';
  }
}

}  // namespace rankmoments
