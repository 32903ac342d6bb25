#pragma once

#include <functional>
#include <optional>
#include <span>

namespace copula_ot {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod integration of f over [a, b], split at the given
/// breakpoints (points outside (a, b) are ignored). Throws DivergenceError
/// when the error estimate stays above max(abs_tol, rel_tol * L1 norm).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {}, double rel_tol = 1e-10,
                           double abs_tol = 1e-13);

/// Integral of f over the open unit interval, truncated to
/// (kQuantileEndpointCut, 1 - kQuantileEndpointCut). The returned error
/// includes an estimate of the truncated endpoint mass. Throws
/// DivergenceError if u * |f(u)| does not decay towards either endpoint,
/// i.e. the integrand is not integrable there. When the caller knows an
/// analytic bound on the truncated endpoint mass it replaces both the decay
/// test and the estimate.
QuadratureResult integrate_unit_interval(const std::function<double(double)>& f,
                                         std::span<const double> breakpoints = {},
                                         std::optional<double> endpoint_bound = std::nullopt);

}  // namespace copula_ot
