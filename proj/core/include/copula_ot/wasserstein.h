#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copula_ot/coupling.h"
#include "copula_ot/distribution.h"

namespace copula_ot {

enum class DistanceMethod { kQuantileIntegral, kCdfArea, kDallAglio, kSharedCopulaSum, kOracleLp };

std::string to_string(DistanceMethod method);

/// Interval known to contain W_{p,q}^p when no exact representation exists.
struct PowerBracket {
  double lower;
  double upper;
};

/// A computed distance. Both W_p and W_p^p are always reported.
struct DistanceReport {
  double value = 0.0;            // W_p
  double value_pth_power = 0.0;  // W_p^p
  double p = 1.0;
  /// Ground-norm order on R^d; nullopt means "same as p".
  std::optional<double> q;
  DistanceMethod method = DistanceMethod::kQuantileIntegral;
  /// Absolute error estimate on value_pth_power; 0 for exact discrete paths.
  double error_bound = 0.0;
  /// Set when q != p: value/value_pth_power then hold the q = p quantity S
  /// and the true W_{p,q}^p is only known to lie inside the bracket.
  std::optional<PowerBracket> bracket;

  bool exact() const { return !bracket.has_value(); }
  double norm_order() const { return q.value_or(p); }
};

/// Builds a report from W_p^p.
DistanceReport make_report(double value_pth_power, double p, DistanceMethod method,
                           double error_bound = 0.0, std::optional<double> q = std::nullopt);

/// W_p^p = integral over (0, 1) of |F^{-1}(u) - G^{-1}(u)|^p du.
///
/// Discrete pairs are evaluated exactly by merging the two cumulative-weight
/// ladders: the integrand is constant between consecutive breakpoints.
/// Otherwise adaptive quadrature on (1e-9, 1 - 1e-9), split at any discrete
/// side's breakpoints. Throws PreconditionError when either measure is not
/// asserted to lie in P_p.
DistanceReport wasserstein_1d(const Distribution1D& f, const Distribution1D& g, double p);

/// W_1 as the area between the two distribution functions.
DistanceReport w1_cdf_area(const Distribution1D& f, const Distribution1D& g);

/// E[fn(X, Y)] for (X, Y) = (F^{-1}(U), G^{-1}(U)), U uniform on (0, 1).
/// Exact finite sum when both margins are discrete.
double comonotone_expectation(const std::function<double(double, double)>& fn,
                              const Distribution1D& f, const Distribution1D& g);

/// The dall'Aglio double-integral form of E|X - Y|^p under a discrete
/// bivariate coupling, p > 1:
///
///   p(p-1) int int_{x>y} [G(y) - H(x,y)] (x-y)^{p-2} dx dy
/// + p(p-1) int int_{y>x} [F(x) - H(x,y)] (y-x)^{p-2} dy dx.
///
/// Both brackets are step functions on the grid of all atoms, so each grid
/// cell is integrated in closed form through the antiderivative (x-y)_+^p.
double dall_aglio_functional(const DiscreteCoupling& coupling, double p);

/// sum_ij pi_ij |x_i - y_j|^p for a coupling on R x R.
double direct_expectation(const DiscreteCoupling& coupling, double p);

struct MinimalityReport {
  double comonotone_value = 0.0;   // I(M)
  std::vector<double> trial_values;  // I(H) per trial
  /// min over trials of I(H) - I(M); +infinity for an empty trial list.
  double min_gap = 0.0;
  bool holds = true;  // min_gap >= -kMinimalitySlack
};

inline constexpr double kMinimalitySlack = 1e-9;

/// Compares I(M) for the comonotone coupling against I(H) for each trial
/// coupling with margins f and g. Throws DomainError on margin mismatch or p <= 1.
MinimalityReport minimality_of_m(const Distribution1D& f, const Distribution1D& g, double p,
                                 std::span<const DiscreteCoupling> trials);

/// W_p between two measures on R^d that share a copula (caller-asserted),
/// given by their margins. When q == p (or unset) the result is exact:
/// the sum over coordinates of W_p^p(f_i, g_i). Otherwise the report carries
/// the norm-equivalence bracket.
DistanceReport wasserstein_shared_copula(std::span<const Distribution1D> f_margins,
                                         std::span<const Distribution1D> g_margins, double p,
                                         std::optional<double> q = std::nullopt);

/// Per-coordinate W_p^p reports, index-ordered.
std::vector<DistanceReport> coordinate_distances(std::span<const Distribution1D> f_margins,
                                                 std::span<const Distribution1D> g_margins,
                                                 double p);

/// The single-variable form: integral over u of ||F^{-1}(u) - G^{-1}(u)||_p^p
/// with the quantile vectors evaluated at a common level u. Exact for
/// discrete margins (merged ladder of all 2d margins).
double quantile_vector_integral(std::span<const Distribution1D> f_margins,
                                std::span<const Distribution1D> g_margins, double p);

struct NormEquivalenceBounds {
  double lower;
  double upper;
  double shared_integral;  // S
};

/// (d^{-1/p} S, d^{1/q} S) with S the shared-copula integral.
NormEquivalenceBounds norm_equivalence_bounds(std::span<const Distribution1D> f_margins,
                                              std::span<const Distribution1D> g_margins, double p,
                                              double q);

}  // namespace copula_ot
