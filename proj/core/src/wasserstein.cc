#include "copula_ot/wasserstein.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "copula_ot/copula.h"
#include "copula_ot/errors.h"
#include "copula_ot/quadrature.h"

namespace copula_ot {
namespace {

void require_order(double p, const char* who) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError(std::string(who) + ": p must be finite and >= 1");
}

void require_moments(const Distribution1D& f, const Distribution1D& g, double p, const char* who) {
  if (f.moment_order() < p || g.moment_order() < p) {
    throw PreconditionError(std::string(who) + ": both measures must be asserted to lie in P_" +
                            std::to_string(p));
  }
}

std::vector<double> level_breakpoints(std::initializer_list<const Distribution1D*> dists) {
  std::vector<double> cuts;
  for (const Distribution1D* d : dists) {
    if (!d->is_discrete()) continue;
    const auto c = d->cumulative();
    cuts.insert(cuts.end(), c.begin(), c.end());
  }
  return cuts;
}

// Analytic endpoint bound on |Q_f - Q_g|^p when every parametric side supplies one.
std::optional<double> endpoint_bound(const Distribution1D& f, const Distribution1D& g, double p) {
  double total = 0.0;
  for (const Distribution1D* d : {&f, &g}) {
    if (d->is_discrete()) {
      const auto atoms = d->atoms();
      const double reach = std::max(std::abs(atoms.front()), std::abs(atoms.back()));
      total += 2.0 * kQuantileEndpointCut * std::pow(reach, p);
    } else if (d->parametric_spec().tail_bound) {
      total += d->parametric_spec().tail_bound(p, kQuantileEndpointCut);
    } else {
      return std::nullopt;
    }
  }
  return std::pow(2.0, p - 1.0) * total;
}

double quantile_at(const Distribution1D& d, double u) { return d.quantile(u).raw(); }

// Exact sum over the merged ladder of fn(F^{-1}, G^{-1}) * width.
long double ladder_sum(const Distribution1D& f, const Distribution1D& g,
                       const std::function<double(double, double)>& fn) {
  const Distribution1D* sides[] = {&f, &g};
  const auto xs = f.atoms();
  const auto ys = g.atoms();
  long double total = 0.0L;
  for_each_ladder_piece(sides, [&](std::span<const std::size_t> index, double width) {
    total += static_cast<long double>(width) * fn(xs[index[0]], ys[index[1]]);
  });
  return total;
}

// p(p-1) times the integral of (x-y)_+^{p-2} over [x0,x1] x [y0,y1], where
// the cell is either the diagonal square (x0 == y0, x1 == y1) or lies
// entirely in x >= y (y1 <= x0).
long double cell_kernel(long double x0, long double x1, long double y0, long double y1, double p,
                        bool diagonal) {
  if (diagonal) return std::pow(x1 - x0, static_cast<long double>(p));
  if (p == 2.0) return 2.0L * (x1 - x0) * (y1 - y0);
  const long double e = p;
  return std::pow(x1 - y0, e) - std::pow(x0 - y0, e) - std::pow(x1 - y1, e) + std::pow(x0 - y1, e);
}

}  // namespace

std::string to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::kQuantileIntegral: return "quantile_integral";
    case DistanceMethod::kCdfArea: return "cdf_area";
    case DistanceMethod::kDallAglio: return "dall_aglio";
    case DistanceMethod::kSharedCopulaSum: return "shared_copula_sum";
    case DistanceMethod::kOracleLp: return "oracle_lp";
  }
  return "unknown";
}

DistanceReport make_report(double value_pth_power, double p, DistanceMethod method,
                           double error_bound, std::optional<double> q) {
  DistanceReport r;
  r.value_pth_power = std::max(value_pth_power, 0.0);
  r.value = p == 1.0 ? r.value_pth_power : std::pow(r.value_pth_power, 1.0 / p);
  r.p = p;
  r.q = q;
  r.method = method;
  r.error_bound = error_bound;
  return r;
}

DistanceReport wasserstein_1d(const Distribution1D& f, const Distribution1D& g, double p) {
  require_order(p, "wasserstein_1d");
  require_moments(f, g, p, "wasserstein_1d");
  if (f.is_discrete() && g.is_discrete()) {
    const long double sum =
        ladder_sum(f, g, [p](double x, double y) { return std::pow(std::abs(x - y), p); });
    return make_report(static_cast<double>(sum), p, DistanceMethod::kQuantileIntegral);
  }
  const auto cuts = level_breakpoints({&f, &g});
  auto integrand = [&](double u) {
    return std::pow(std::abs(quantile_at(f, u) - quantile_at(g, u)), p);
  };
  const QuadratureResult q = integrate_unit_interval(integrand, cuts, endpoint_bound(f, g, p));
  return make_report(q.value, p, DistanceMethod::kQuantileIntegral, q.error);
}

DistanceReport w1_cdf_area(const Distribution1D& f, const Distribution1D& g) {
  require_moments(f, g, 1.0, "w1_cdf_area");
  if (f.is_discrete() && g.is_discrete()) {
    std::vector<double> grid(f.atoms().begin(), f.atoms().end());
    grid.insert(grid.end(), g.atoms().begin(), g.atoms().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    long double area = 0.0L;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const long double gap = std::abs(f.cdf(grid[k]) - g.cdf(grid[k]));
      area += gap * (static_cast<long double>(grid[k + 1]) - grid[k]);
    }
    return make_report(static_cast<double>(area), 1.0, DistanceMethod::kCdfArea);
  }

  auto edge = [](const Distribution1D& d, bool low) {
    if (d.is_discrete()) return low ? d.atoms().front() : d.atoms().back();
    return quantile_at(d, low ? kQuantileEndpointCut : 1.0 - kQuantileEndpointCut);
  };
  const double lo = std::min(edge(f, true), edge(g, true));
  const double hi = std::max(edge(f, false), edge(g, false));
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DivergenceError("w1_cdf_area: integration range is unbounded");
  }
  std::vector<double> cuts;
  for (const Distribution1D* d : {&f, &g}) {
    if (d->is_discrete()) cuts.insert(cuts.end(), d->atoms().begin(), d->atoms().end());
  }
  auto integrand = [&](double x) { return std::abs(f.cdf(x) - g.cdf(x)); };
  const QuadratureResult q = integrate(integrand, lo, hi, cuts);
  // Mass outside [lo, hi] is at most the cut level on each side of each measure.
  const double tail = 2.0 * kQuantileEndpointCut * (std::abs(lo) + std::abs(hi) + (hi - lo));
  return make_report(q.value, 1.0, DistanceMethod::kCdfArea, q.error + tail);
}

double comonotone_expectation(const std::function<double(double, double)>& fn,
                              const Distribution1D& f, const Distribution1D& g) {
  if (!fn) throw DomainError("comonotone_expectation: missing function");
  if (f.is_discrete() && g.is_discrete()) return static_cast<double>(ladder_sum(f, g, fn));
  const auto cuts = level_breakpoints({&f, &g});
  auto integrand = [&](double u) { return fn(quantile_at(f, u), quantile_at(g, u)); };
  return integrate_unit_interval(integrand, cuts).value;
}

double direct_expectation(const DiscreteCoupling& coupling, double p) {
  coupling.check_shape();
  if (coupling.row_support.front().size() != 1) {
    throw DomainError("direct_expectation: coupling must live on R x R");
  }
  return plan_cost(coupling, p, p);
}

double dall_aglio_functional(const DiscreteCoupling& coupling, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("dall_aglio_functional: requires finite p > 1");
  }
  coupling.check_shape();
  if (coupling.row_support.front().size() != 1) {
    throw DomainError("dall_aglio_functional: coupling must live on R x R");
  }
  if (std::abs(coupling.total_mass() - 1.0) > kMarginTolerance) {
    throw DomainError("dall_aglio_functional: coupling mass does not sum to 1");
  }

  const std::size_t m = coupling.mass.rows();
  const std::size_t n = coupling.mass.cols();
  std::vector<double> grid;
  for (const Point& x : coupling.row_support) grid.push_back(x[0]);
  for (const Point& y : coupling.col_support) grid.push_back(y[0]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t k_size = grid.size();
  auto slot = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
  };

  // h[k][l] = H(z_k, z_l): mass of {X <= z_k, Y <= z_l}.
  std::vector<long double> h(k_size * k_size, 0.0L);
  auto at = [&](std::size_t k, std::size_t l) -> long double& { return h[k * k_size + l]; };
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = slot(coupling.row_support[i][0]);
    for (std::size_t j = 0; j < n; ++j) at(k, slot(coupling.col_support[j][0])) += coupling.mass(i, j);
  }
  for (std::size_t k = 0; k < k_size; ++k) {
    for (std::size_t l = 0; l < k_size; ++l) {
      if (k > 0) at(k, l) += at(k - 1, l);
      if (l > 0) at(k, l) += at(k, l - 1);
      if (k > 0 && l > 0) at(k, l) -= at(k - 1, l - 1);
    }
  }
  std::vector<long double> big_f(k_size);
  std::vector<long double> big_g(k_size);
  for (std::size_t k = 0; k < k_size; ++k) {
    big_f[k] = at(k, k_size - 1);
    big_g[k] = at(k_size - 1, k);
  }

  // Cells [z_k, z_{k+1}) x [z_l, z_{l+1}). Outside [z_0, z_last]^2 both
  // brackets vanish on the relevant half-plane.
  long double total = 0.0L;
  for (std::size_t k = 0; k + 1 < k_size; ++k) {
    for (std::size_t l = 0; l + 1 < k_size; ++l) {
      if (k >= l) {
        // x above y: [G(y) - H(x, y)] weighs (x - y)^{p-2}.
        const long double bracket = big_g[l] - at(k, l);
        if (bracket != 0.0L) {
          total += bracket * cell_kernel(grid[k], grid[k + 1], grid[l], grid[l + 1], p, k == l);
        }
      }
      if (l >= k) {
        // y above x: [F(x) - H(x, y)] weighs (y - x)^{p-2}.
        const long double bracket = big_f[k] - at(k, l);
        if (bracket != 0.0L) {
          total += bracket * cell_kernel(grid[l], grid[l + 1], grid[k], grid[k + 1], p, k == l);
        }
      }
    }
  }
  return static_cast<double>(total);
}

MinimalityReport minimality_of_m(const Distribution1D& f, const Distribution1D& g, double p,
                                 std::span<const DiscreteCoupling> trials) {
  if (!(p > 1.0)) throw DomainError("minimality_of_m: requires p > 1");
  const DiscreteCoupling comonotone = coupling_from_joint(comonotone_joint_2d(f, g));

  MinimalityReport report;
  report.comonotone_value = dall_aglio_functional(comonotone, p);
  report.min_gap = std::numeric_limits<double>::infinity();
  const auto xs = f.atoms();
  const auto ys = g.atoms();
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const DiscreteCoupling& trial = trials[t];
    trial.check_shape();
    bool same_support = trial.row_support.size() == xs.size() && trial.col_support.size() == ys.size();
    for (std::size_t i = 0; same_support && i < xs.size(); ++i) {
      same_support = trial.row_support[i].size() == 1 && trial.row_support[i][0] == xs[i];
    }
    for (std::size_t j = 0; same_support && j < ys.size(); ++j) {
      same_support = trial.col_support[j].size() == 1 && trial.col_support[j][0] == ys[j];
    }
    if (!same_support) {
      throw DomainError("minimality_of_m: trial " + std::to_string(t) + " is supported on other atoms");
    }
    check_margins(trial, f.weights(), g.weights());
    const double value = dall_aglio_functional(trial, p);
    report.trial_values.push_back(value);
    report.min_gap = std::min(report.min_gap, value - report.comonotone_value);
  }
  report.holds = !(report.min_gap < -kMinimalitySlack);
  return report;
}

std::vector<DistanceReport> coordinate_distances(std::span<const Distribution1D> f_margins,
                                                 std::span<const Distribution1D> g_margins,
                                                 double p) {
  if (f_margins.size() != g_margins.size()) {
    throw DomainError("shared-copula distance: margin lists differ in length");
  }
  if (f_margins.empty()) throw DomainError("shared-copula distance: no margins");
  std::vector<DistanceReport> reports;
  reports.reserve(f_margins.size());
  for (std::size_t i = 0; i < f_margins.size(); ++i) {
    reports.push_back(wasserstein_1d(f_margins[i], g_margins[i], p));
  }
  return reports;
}

double quantile_vector_integral(std::span<const Distribution1D> f_margins,
                                std::span<const Distribution1D> g_margins, double p) {
  require_order(p, "quantile_vector_integral");
  if (f_margins.size() != g_margins.size() || f_margins.empty()) {
    throw DomainError("quantile_vector_integral: margin lists must be nonempty and equal in length");
  }
  const std::size_t d = f_margins.size();
  std::vector<const Distribution1D*> all;
  for (std::size_t i = 0; i < d; ++i) all.push_back(&f_margins[i]);
  for (std::size_t i = 0; i < d; ++i) all.push_back(&g_margins[i]);
  const bool discrete = std::all_of(all.begin(), all.end(), [](const Distribution1D* x) {
    return x->is_discrete();
  });

  if (discrete) {
    long double total = 0.0L;
    for_each_ladder_piece(all, [&](std::span<const std::size_t> index, double width) {
      long double gap = 0.0L;
      for (std::size_t i = 0; i < d; ++i) {
        gap += std::pow(std::abs(all[i]->atoms()[index[i]] - all[d + i]->atoms()[index[d + i]]), p);
      }
      total += width * gap;
    });
    return static_cast<double>(total);
  }

  std::vector<double> cuts;
  for (const Distribution1D* x : all) {
    if (x->is_discrete()) cuts.insert(cuts.end(), x->cumulative().begin(), x->cumulative().end());
  }
  auto integrand = [&](double u) {
    double gap = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      gap += std::pow(std::abs(quantile_at(*all[i], u) - quantile_at(*all[d + i], u)), p);
    }
    return gap;
  };
  return integrate_unit_interval(integrand, cuts).value;
}

NormEquivalenceBounds norm_equivalence_bounds(std::span<const Distribution1D> f_margins,
                                              std::span<const Distribution1D> g_margins, double p,
                                              double q) {
  require_order(p, "norm_equivalence_bounds");
  if (!(q >= 1.0)) throw DomainError("norm_equivalence_bounds: q must be >= 1");
  if (f_margins.size() != g_margins.size()) {
    throw DomainError("norm_equivalence_bounds: margin lists differ in length");
  }
  const double s = quantile_vector_integral(f_margins, g_margins, p);
  const double d = static_cast<double>(f_margins.size());
  return {std::pow(d, -1.0 / p) * s, std::pow(d, 1.0 / q) * s, s};
}

DistanceReport wasserstein_shared_copula(std::span<const Distribution1D> f_margins,
                                         std::span<const Distribution1D> g_margins, double p,
                                         std::optional<double> q) {
  require_order(p, "wasserstein_shared_copula");
  const auto coords = coordinate_distances(f_margins, g_margins, p);
  long double sum = 0.0L;
  double error = 0.0;
  for (const DistanceReport& r : coords) {
    sum += r.value_pth_power;
    error += r.error_bound;
  }
  DistanceReport report =
      make_report(static_cast<double>(sum), p, DistanceMethod::kSharedCopulaSum, error, q);
  if (q && *q != p) {
    if (!(*q >= 1.0)) throw DomainError("wasserstein_shared_copula: q must be >= 1");
    const double d = static_cast<double>(coords.size());
    report.bracket = PowerBracket{std::pow(d, -1.0 / p) * report.value_pth_power,
                                  std::pow(d, 1.0 / *q) * report.value_pth_power};
  }
  return report;
}

}  // namespace copula_ot
