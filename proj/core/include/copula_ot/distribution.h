#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "copula_ot/extended_real.h"

namespace copula_ot {

/// Absolute tolerance used when comparing cumulative weights against a level u.
inline constexpr double kQuantileTieTolerance = 1e-12;

/// Tolerance on the total mass of a discrete distribution.
inline constexpr double kWeightSumTolerance = 1e-12;

/// Lower/upper cut of the open unit interval used by every quadrature over u.
inline constexpr double kQuantileEndpointCut = 1e-9;

enum class DistributionKind { kDiscrete, kEmpirical, kParametricQuantile };

struct Atom {
  double location;
  double weight;
};

/// Evaluators for a distribution known only through its CDF and quantile
/// function. Both must be supplied; no numerical inversion is attempted.
struct ParametricSpec {
  std::string label;
  std::function<double(double)> quantile;  // defined on (0, 1)
  std::function<double(double)> cdf;       // defined on R
  /// Largest p for which E|X|^p < infinity is asserted.
  double moment_order = 1.0;
  /// Optional bound on the integral of |Q(u)|^p over (0, eps) and (1 - eps, 1).
  std::function<double(double p, double eps)> tail_bound;
};

/// A probability measure on R exposed through its distribution function and
/// generalized inverse.
///
/// Discrete and empirical measures are stored as sorted, strictly increasing
/// atoms with strictly positive weights; duplicate locations are merged at
/// construction. Values are immutable once built and safe to share between
/// threads.
class Distribution1D {
 public:
  /// Builds a discrete measure. Weights must be > 0 and sum to 1 within
  /// kWeightSumTolerance. Atoms may come in any order and may repeat.
  static Distribution1D discrete(std::span<const Atom> atoms);
  static Distribution1D discrete(std::span<const double> locations, std::span<const double> weights);
  static Distribution1D point_mass(double location);
  static Distribution1D parametric(ParametricSpec spec);

  DistributionKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ != DistributionKind::kParametricQuantile; }

  /// P(X <= x). Right-continuous; 0 below the support and 1 above it.
  double cdf(double x) const;

  /// inf{x : F(x) >= u} for u in (0, 1]. Throws DomainError otherwise.
  ExtendedReal quantile(double u) const;

  /// Largest p for which membership in P_p(R) is asserted. Infinite for
  /// discrete measures.
  double moment_order() const { return moment_order_; }

  // Discrete accessors. Throw DomainError on parametric distributions.
  std::span<const double> atoms() const;
  std::span<const double> weights() const;
  /// cumulative()[k] = F(atoms()[k]); the last entry is exactly 1.
  std::span<const double> cumulative() const;
  std::size_t size() const { return atoms_.size(); }

  const ParametricSpec& parametric_spec() const;

 private:
  friend Distribution1D from_samples(std::span<const double> samples);

  Distribution1D() = default;
  void require_discrete(const char* what) const;

  DistributionKind kind_ = DistributionKind::kDiscrete;
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::shared_ptr<const ParametricSpec> parametric_;
  double moment_order_ = std::numeric_limits<double>::infinity();
};

/// Empirical measure of a sample: mass 1/n on each observation.
Distribution1D from_samples(std::span<const double> samples);

/// E|X|^p. Exact for discrete measures; adaptive quadrature of |Q(u)|^p
/// otherwise (DivergenceError if it does not converge).
double p_moment(const Distribution1D& dist, double p);

struct TailDiagnosticRow {
  double x;
  double upper;  // x^r (1 - F(x))
  double lower;  // x^r F(-x)
};

/// Tail terms whose vanishing as x -> infinity characterizes finite moments of order < r.
std::vector<TailDiagnosticRow> tail_decay_diagnostic(const Distribution1D& dist, double r,
                                                     std::span<const double> grid);

/// (F^{-1}(u_k), G^{-1}(u_k)) at the midpoints u_k = (k - 1/2) / n.
std::vector<std::pair<double, double>> comonotone_pushforward(const Distribution1D& f,
                                                              const Distribution1D& g,
                                                              std::size_t n);

/// Walks the merged cumulative-weight ladder of several discrete
/// distributions. Each visit receives, for the current piece (c_{k-1}, c_k] of
/// the unit interval, the index of the atom F_i^{-1} returns on it for every
/// margin, plus the piece width. Cumulative weights within
/// kQuantileTieTolerance advance together, so no piece has zero width.
void for_each_ladder_piece(
    std::span<const Distribution1D* const> margins,
    const std::function<void(std::span<const std::size_t> index, double width)>& visit);

namespace distributions {

Distribution1D normal(double mean, double stddev);
Distribution1D uniform(double lower, double upper);
Distribution1D exponential(double rate);

}  // namespace distributions

}  // namespace copula_ot
