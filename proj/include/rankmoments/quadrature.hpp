#pragma once

#include <cstddef>
#include <functional>

namespace rankmoments {

struct QuadratureSettings {
  double abs_tol = 1e-13;
  std::size_t max_subdivisions = 2000;
  double clamp_eps = 1e-10;

  void validate() const;
  bool operator==(const QuadratureSettings&) const = default;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]. The interval with the
/// largest error estimate is bisected until the summed estimate drops below
/// `abs_tol` (or the accumulated roundoff floor, whichever is larger).
/// Throws ConvergenceError when `max_subdivisions` intervals are in use and
/// the target is still missed.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           std::size_t max_subdivisions);

/// Single 21-point Kronrod rule with the embedded 10-point Gauss estimate.
QuadratureResult gauss_kronrod21(const std::function<double(double)>& f, double a, double b);

}  // namespace rankmoments
