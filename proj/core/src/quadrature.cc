#include "copula_ot/quadrature.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "copula_ot/distribution.h"
#include "copula_ot/errors.h"

namespace copula_ot {
namespace {

constexpr std::size_t kMaxSubintervals = 4000;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;

  bool operator<(const Panel& other) const { return error < other.error; }
};

// 15-point Kronrod rule with the embedded 7-point Gauss rule, error scaled
// to the panel width.
Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kronrod = wk[0] * f0;
  double gauss = wg[0] * f0;
  double l1 = wk[0] * std::abs(f0);
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double lo = f(mid - half * x[k]);
    const double hi = f(mid + half * x[k]);
    kronrod += wk[k] * (lo + hi);
    l1 += wk[k] * (std::abs(lo) + std::abs(hi));
    if (k % 2 == 0) gauss += wg[k / 2] * (lo + hi);
  }
  return {a, b, half * kronrod, half * std::abs(kronrod - gauss), half * l1};
}

// Reference point for the endpoint decay test, well inside the unit interval.
constexpr double kDecayProbe = 1e-6;

// Below this, a non-decaying tail term is treated as numerically zero.
constexpr double kNegligibleTail = 1e-9;

// Geometric cuts toward both endpoints, where quantile integrands blow up.
std::vector<double> with_endpoint_cuts(std::span<const double> breakpoints) {
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  for (double t = 1e-8; t < 0.5; t *= 10.0) {
    cuts.push_back(t);
    cuts.push_back(1.0 - t);
  }
  cuts.push_back(0.5);
  return cuts;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, double rel_tol, double abs_tol) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: interval must be finite with a <= b");
  }
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> panels;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Panel panel = kronrod_panel(f, cuts[k], cuts[k + 1]);
    value += panel.value;
    error += panel.error;
    l1 += panel.l1;
    panels.push(panel);
  }
  auto converged = [&] { return error <= std::max(abs_tol, rel_tol * l1); };
  while (!converged() && panels.size() < kMaxSubintervals && std::isfinite(error)) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      panels.push(worst);
      break;
    }
    const Panel left = kronrod_panel(f, worst.a, mid);
    const Panel right = kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
  }
  if (!std::isfinite(value) || !std::isfinite(error)) {
    throw DivergenceError("integrate: integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  // Re-sum to shed the drift of the running updates.
  QuadratureResult total;
  while (!panels.empty()) {
    total.value += panels.top().value;
    total.error += panels.top().error;
    panels.pop();
  }
  if (total.error > std::max(abs_tol, 1e3 * rel_tol * l1)) {
    throw DivergenceError("integrate: adaptive quadrature did not converge on [" + std::to_string(a) +
                          ", " + std::to_string(b) + "] (error estimate " +
                          std::to_string(total.error) + ")");
  }
  return total;
}

QuadratureResult integrate_unit_interval(const std::function<double(double)>& f,
                                         std::span<const double> breakpoints,
                                         std::optional<double> endpoint_bound) {
  const double lo = kQuantileEndpointCut;
  const double hi = 1.0 - kQuantileEndpointCut;

  if (endpoint_bound) {
    if (!std::isfinite(*endpoint_bound)) {
      throw DivergenceError("integrate_unit_interval: endpoint tail bound is infinite");
    }
    QuadratureResult result = integrate(f, lo, hi, with_endpoint_cuts(breakpoints));
    result.error += *endpoint_bound;
    return result;
  }

  // u |f(u)| -> 0 at an endpoint is necessary for integrability there.
  auto tail_term = [&](double dist_to_end, double u) { return dist_to_end * std::abs(f(u)); };
  const double low_edge = tail_term(lo, lo);
  const double low_probe = tail_term(kDecayProbe, kDecayProbe);
  const double high_edge = tail_term(lo, hi);
  const double high_probe = tail_term(kDecayProbe, 1.0 - kDecayProbe);
  auto diverges = [](double edge, double probe) {
    return !std::isfinite(edge) || (edge > kNegligibleTail && edge >= 0.5 * probe);
  };
  if (diverges(low_edge, low_probe) || diverges(high_edge, high_probe)) {
    throw DivergenceError("integrate_unit_interval: integrand tail does not vanish at an endpoint");
  }

  QuadratureResult result = integrate(f, lo, hi, with_endpoint_cuts(breakpoints));
  result.error += 2.0 * (low_edge + high_edge);
  return result;
}

}  // namespace copula_ot
