#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rankmoments/binormal.hpp"
#include "rankmoments/correlation.hpp"
#include "rankmoments/errors.hpp"

using namespace rankmoments;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force route to Var(S) and Cov(S, I): enumerate every way the indices
// of two indicator terms can coincide, and evaluate each joint probability
// as an orthant probability of the standardized differences. Nothing here
// uses the pattern table or the Omega assembly.
struct Diff {
  int var;  // 0 = X, 1 = Y
  int a, b;
};

double diff_corr(const Diff& u, const Diff& v, double rho) {
  const int k = (u.a == v.a) - (u.a == v.b) - (u.b == v.a) + (u.b == v.b);
  return 0.5 * k * (u.var == v.var ? 1.0 : rho);
}

double orthant(std::vector<Diff> d, double rho) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < d.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < d.size() && !changed; ++j) {
        const double c = diff_corr(d[i], d[j], rho);
        if (std::abs(c + 1.0) < 1e-12) return 0.0;
        if (std::abs(c - 1.0) < 1e-12) {
          d.erase(d.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  const auto c = [&](std::size_t i, std::size_t j) { return diff_corr(d[i], d[j], rho); };
  switch (d.size()) {
    case 1: return 0.5;
    case 2: return orthant_p2(c(0, 1));
    case 3: return orthant_p3(c(0, 1), c(0, 2), c(1, 2));
    case 4: return orthant_p4(CorrelationMatrix4::from_upper(c(0, 1), c(0, 2), c(0, 3), c(1, 2), c(1, 3), c(2, 3)));
    default: FAIL("unexpected dimension"); return 0.0;
  }
}

// I-term (a, b): H(X_a - X_b) H(Y_a - Y_b); J-term (i, j, k): H(X_i - X_j) H(Y_i - Y_k).
std::vector<Diff> term(const std::vector<int>& idx) {
  if (idx.size() == 2) return {{0, idx[0], idx[1]}, {1, idx[0], idx[1]}};
  return {{0, idx[0], idx[1]}, {1, idx[0], idx[2]}};
}

void growth_strings(std::size_t len, std::vector<int>& cur, int mx, std::vector<std::vector<int>>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= mx + 1; ++v) {
    cur.push_back(v);
    growth_strings(len, cur, std::max(mx, v), out);
    cur.pop_back();
  }
}

// Covariance of two term families as a polynomial in falling factorials:
// result[m] multiplies n (n-1) ... (n-m+1).
std::map<int, double> cov_poly(std::size_t s1, std::size_t s2, double rho) {
  std::vector<std::vector<int>> labels;
  std::vector<int> cur;
  growth_strings(s1 + s2, cur, -1, labels);
  std::map<int, double> out;
  for (const auto& lab : labels) {
    std::vector<int> a(lab.begin(), lab.begin() + static_cast<std::ptrdiff_t>(s1));
    std::vector<int> b(lab.begin() + static_cast<std::ptrdiff_t>(s1), lab.end());
    auto distinct = [](std::vector<int> v) {
      std::sort(v.begin(), v.end());
      return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!distinct(a) || !distinct(b)) continue;
    bool shared = false;
    for (int x : a) shared = shared || std::find(b.begin(), b.end(), x) != b.end();
    if (!shared) continue;
    const int m = *std::max_element(lab.begin(), lab.end()) + 1;
    auto da = term(a), db = term(b);
    auto both = da;
    both.insert(both.end(), db.begin(), db.end());
    out[m] += orthant(both, rho) - orthant(da, rho) * orthant(db, rho);
  }
  return out;
}

double falling(double n, int m) {
  double r = 1.0;
  for (int t = 0; t < m; ++t) r *= n - t;
  return r;
}

struct Brute {
  double var_rs;
  double cov_rs_rk;
  double var_rk;
};

Brute brute_moments(double rho, std::int64_t n) {
  const auto ii = cov_poly(2, 2, rho), ij = cov_poly(2, 3, rho), ji = cov_poly(3, 2, rho), jj = cov_poly(3, 3, rho);
  const double m = static_cast<double>(n);
  auto eval = [&](const std::map<int, double>& p) {
    double s = 0.0;
    for (const auto& [k, c] : p) s += falling(m, k) * c;
    return s;
  };
  const double var_s = eval(ii) + eval(ij) + eval(ji) + eval(jj);
  const double cov_si = eval(ii) + eval(ji);
  // T = 4 I + const, rK = T / (n(n-1)), rS = 12 S / (n(n^2-1)) + const
  return {144.0 * var_s / (m * m * (m * m - 1) * (m * m - 1)),
          12.0 / (m * (m * m - 1)) * 4.0 * cov_si / (m * (m - 1)), 16.0 * eval(ii) / (m * m * (m - 1) * (m - 1))};
}

}  // namespace

TEST_CASE("anchor values") {
  const auto z = omegas(0.0);
  CHECK(z.omega1 == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(z.omega2 == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(z.omega3 == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
  CHECK(z.omega4 == 0.0);
  const auto o = omegas(1.0);
  CHECK(o.omega1 == 1.0);
  CHECK(o.omega2 == doctest::Approx(16.0 / 3.0));
  CHECK(o.omega3 == 0.5);
  CHECK(o.omega4 == doctest::Approx(2.0 * kPi * kPi / 9.0));
  // the quadrature route approaches the closed-form endpoint
  const auto near = omegas(1.0 - 1e-9);
  CHECK(near.omega1 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(near.omega3 == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("pattern table") {
  CHECK(pattern_index('c') == 0);
  CHECK(pattern_index('q') == 11);
  CHECK_THROWS_AS(pattern_index('z'), DomainError);
  for (double rho : {-0.7, 0.0, 0.4, 1.0}) {
    const auto t = derive_pattern_matrices(rho);
    for (const auto& m : t.matrices) CHECK_NOTHROW(m.validate());
    CHECK_THROWS(t.w('c'));
  }
}

TEST_CASE("W identities") {
  for (int k = 0; k <= 10; ++k) {
    const double rho = 0.1 * k;
    const auto t = evaluate_patterns(rho);
    CAPTURE(rho);
    CHECK(std::abs(t.w('e') - 2 * t.w('d')) < 1e-10);
    CHECK(std::abs(t.w('g') - t.w('p')) < 1e-10);
    CHECK(std::abs(t.w('h') - t.w('q')) < 1e-10);
    CHECK(std::abs(t.w('m') - 2 * t.w('l') - 1.0 / 3.0) < 1e-10);
  }
}

TEST_CASE("exact moments against the index-coincidence enumeration") {
  for (double rho : {0.25, 0.5, -0.8, 0.95}) {
    for (std::int64_t n : {4, 5, 9, 30}) {
      const auto b = brute_moments(rho, n);
      CAPTURE(rho);
      CAPTURE(n);
      CHECK(var_rs_exact(rho, n) == doctest::Approx(b.var_rs).epsilon(1e-11));
      CHECK(cov_rs_rk_exact(rho, n) == doctest::Approx(b.cov_rs_rk).epsilon(1e-11));
      CHECK(lemma2_moments(rho, n).var_rk == doctest::Approx(b.var_rk).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact moments at rho = 0 over all permutations") {
  for (int n = 4; n <= 8; ++n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    double s2 = 0.0, sk = 0.0, k2 = 0.0, count = 0.0;
    std::vector<double> x(perm.size()), y(perm.size());
    do {
      for (std::size_t i = 0; i < perm.size(); ++i) {
        x[i] = static_cast<double>(i);
        y[i] = perm[i];
      }
      const PairedSample s(x, y);
      const double rs = spearman(s), rk = kendall(s);
      s2 += rs * rs;
      sk += rs * rk;
      k2 += rk * rk;
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CAPTURE(n);
    CHECK(var_rs_exact(0.0, n) == doctest::Approx(s2 / count).epsilon(1e-13));
    CHECK(cov_rs_rk_exact(0.0, n) == doctest::Approx(sk / count).epsilon(1e-13));
    CHECK(cov_rs_rk_corollary(0.0, n) == doctest::Approx(sk / count).epsilon(1e-13));
    CHECK(lemma2_moments(0.0, n).var_rk == doctest::Approx(k2 / count).epsilon(1e-13));
  }
}

TEST_CASE("closed forms at rho = 0 and +-1") {
  for (std::int64_t n = 4; n <= 100; ++n) {
    const double m = static_cast<double>(n);
    CHECK(std::abs(var_rs_exact(0.0, n) - 1.0 / (m - 1.0)) < 1e-12);
    CHECK(std::abs(cov_rs_rk_exact(0.0, n) - 2.0 * (m + 1.0) / (3.0 * m * (m - 1.0))) < 1e-12);
    for (double r : {-1.0, 1.0}) {
      CHECK(std::abs(var_rs_exact(r, n)) < 1e-9);
      CHECK(std::abs(cov_rs_rk_exact(r, n)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(var_rs_exact(0.3, 3), SizeError);
  CHECK_THROWS_AS(var_rs_exact(1.2, 10), DomainError);
}

TEST_CASE("symmetry in rho") {
  for (double rho : {0.15, 0.55, 0.85}) {
    CHECK(var_rs_exact(-rho, 12) == doctest::Approx(var_rs_exact(rho, 12)).epsilon(1e-12));
    CHECK(cov_rs_rk_exact(-rho, 12) == doctest::Approx(cov_rs_rk_exact(rho, 12)).epsilon(1e-12));
    CHECK(lemma2_moments(-rho, 12).mean_rs == doctest::Approx(-lemma2_moments(rho, 12).mean_rs));
  }
}

TEST_CASE("Omega4 form of the covariance") {
  for (int k = 0; k <= 20; ++k) {
    const double rho = 0.05 * k;
    const auto o = omegas(rho);
    CAPTURE(rho);
    CHECK(std::abs(o.omega3 - 1.0 / 18.0 - 2.0 * o.omega4 / (kPi * kPi)) < 1e-8);
    CHECK(cov_rs_rk_corollary(rho, 15) == doctest::Approx(cov_rs_rk_exact(rho, 15)).epsilon(1e-9));
  }
}

TEST_CASE("large-n behaviour") {
  for (double rho : {0.0, 0.3, 0.7, 0.95}) {
    const std::int64_t n = 1000000;
    const double m = static_cast<double>(n);
    CHECK(m * var_rs_exact(rho, n) == doctest::Approx(m * var_rs_asymptotic(rho, n)).epsilon(1e-4));
    CHECK(m * cov_rs_rk_exact(rho, n) == doctest::Approx(m * cov_rs_rk_asymptotic(rho, n)).epsilon(1e-4));
  }
  for (int k = -6; k <= 6; ++k) {
    const double rho = 0.05 * k;
    CHECK(std::abs(100 * cov_rs_rk_asymptotic(rho, 100) - 100 * cov_series_asymptotic(rho, 100)) < 1e-5);
  }
}

TEST_CASE("means") {
  const auto l = lemma2_moments(0.6, 20);
  CHECK(l.mean_rk == doctest::Approx(2.0 / kPi * std::asin(0.6)));
  // E rS from the pair and triple probabilities
  const double es = 20.0 * 19.0 * orthant_p2(0.6) + 20.0 * 19.0 * 18.0 * orthant_p2(0.3);
  CHECK(l.mean_rs == doctest::Approx((12.0 * es - 3.0 * 20 * 19 * 19) / (20.0 * 399.0)).epsilon(1e-14));
  CHECK(l.mean_rs_asymp == doctest::Approx(6.0 / kPi * std::asin(0.3)));
}

TEST_CASE("tabulation") {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(0.05 * k);
  const auto par = tabulate_omegas(grid);
  const auto ser = tabulate_omegas_serial(grid);
  REQUIRE(par.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(par[i].ok);
    CHECK(par[i].values.omega1 == ser[i].values.omega1);
    CHECK(par[i].values.omega2 == ser[i].values.omega2);
    CHECK(par[i].values.omega3 == ser[i].values.omega3);
    if (i > 0) CHECK(par[i].values.omega1 >= par[i - 1].values.omega1);
  }
  std::ostringstream a, b;
  write_omega_table(a, par, 10);
  write_omega_table(b, ser, 10);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("rho,omega1,omega2,omega3\n0.00,0.1111111111,0.5555555556,0.0555555556\n", 0) == 0);

  auto bad = par;
  bad[3].ok = false;
  bad[3].error = "synthetic";
  std::ostringstream c;
  CHECK_THROWS_AS(write_omega_table(c, bad, 10), ConvergenceError);
}

TEST_CASE("formatting") {
  CHECK(format_fixed(-1e-17, 4) == "0.0000");
  CHECK(format_fixed(0.125, 2) == "0.12");  // ties go to even
  CHECK(format_fixed(2.0 / 3.0, 10) == "0.6666666667");
  CHECK(format_grid_value(0.05) == "0.05");
  CHECK(format_grid_value(1.0) == "1.00");
  CHECK(format_grid_value(-0.125) == "-0.125");
}

TEST_CASE("cache") {
  clear_omega_cache();
  CHECK(omega_cache_size() == 0);
  const auto a = omegas(0.37);
  CHECK(omega_cache_size() == 1);
  const auto b = omegas(0.37);
  CHECK(a.omega1 == b.omega1);
  CHECK(omega_cache_size() == 1);
  QuadratureSettings loose;
  loose.abs_tol = 1e-9;
  omegas(0.37, loose);
  CHECK(omega_cache_size() == 2);
}
