#include "rankmoments/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

// Kronrod abscissae (descending) and weights; odd entries are the Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745270245, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Piece {
  double a, b;
  double value, error, roundoff;
  bool operator<(const Piece& o) const { return error < o.error; }
};

struct Estimate {
  double value, error, roundoff;
};

Estimate kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  const double fc = f(center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (std::size_t j = 0; j < 5; ++j) {
    const std::size_t k = 2 * j + 1;
    const double dx = half * kXgk[k];
    f1[k] = f(center - dx);
    f2[k] = f(center + dx);
    resg += kWg[j] * (f1[k] + f2[k]);
    resk += kWgk[k] * (f1[k] + f2[k]);
    resabs += kWgk[k] * (std::abs(f1[k]) + std::abs(f2[k]));
  }
  for (std::size_t j = 0; j < 5; ++j) {
    const std::size_t k = 2 * j;
    const double dx = half * kXgk[k];
    f1[k] = f(center - dx);
    f2[k] = f(center + dx);
    resk += kWgk[k] * (f1[k] + f2[k]);
    resabs += kWgk[k] * (std::abs(f1[k]) + std::abs(f2[k]));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (std::size_t k = 0; k < 10; ++k) resasc += kWgk[k] * (std::abs(f1[k] - reskh) + std::abs(f2[k] - reskh));

  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * kEps * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(floor, err);
  if (!std::isfinite(resk)) {
    std::ostringstream msg;
    msg << "non-finite integrand on [" << a << ", " << b << "]";
    throw DomainError(msg.str());
  }
  return {resk * half, err, floor};
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
  if (!(clamp_eps >= 0.0)) throw DomainError("clamp_eps must be nonnegative");
}

QuadratureResult gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
  const auto e = kronrod(f, a, b);
  return {e.value, e.error, 1};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           std::size_t max_subdivisions) {
  if (a == b) return {0.0, 0.0, 0};
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");

  std::priority_queue<Piece> heap;
  const auto first = kronrod(f, a, b);
  heap.push({a, b, first.value, first.error, first.roundoff});
  double total = first.value;
  double error = first.error;
  double roundoff = first.roundoff;

  while (error > std::max(abs_tol, roundoff)) {
    if (heap.size() >= max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature on [" << a << ", " << b << "] did not reach " << abs_tol << " in " << max_subdivisions
          << " subintervals (estimate " << error << ")";
      throw ConvergenceError(msg.str());
    }
    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(std::abs(worst.b - worst.a) > 4.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) ||
        mid == worst.a || mid == worst.b) {
      // Interval is at machine resolution; no further progress is possible.
      std::ostringstream msg;
      msg << "quadrature on [" << a << ", " << b << "] hit machine resolution near " << mid << " (estimate "
          << error << ")";
      throw ConvergenceError(msg.str());
    }
    heap.pop();
    const auto left = kronrod(f, worst.a, mid);
    const auto right = kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    roundoff += left.roundoff + right.roundoff - worst.roundoff;
    heap.push({worst.a, mid, left.value, left.error, left.roundoff});
    heap.push({mid, worst.b, right.value, right.error, right.roundoff});
  }

  // Re-sum from the pieces so the running update's cancellation does not leak in.
  QuadratureResult out;
  out.intervals = heap.size();
  std::vector<Piece> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  for (const auto& p : pieces) {
    out.value += p.value;
    out.abs_error += p.error;
  }
  return out;
}

}  // namespace rankmoments
