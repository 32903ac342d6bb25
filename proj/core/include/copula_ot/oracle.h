#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "copula_ot/coupling.h"
#include "copula_ot/distribution.h"

namespace copula_ot {

/// Default per-side atom limit for solve_exact.
inline constexpr std::size_t kDefaultOracleMaxAtoms = 64;

/// Per-side atom limit for enumerate_extreme_couplings.
inline constexpr std::size_t kMaxEnumerationAtoms = 4;

/// Tolerance of the dual certificate attached to every exact solve.
inline constexpr double kCertificateTolerance = 1e-9;

/// A discrete optimal-transport problem with cost ||x - y||_q^p.
struct TransportInstance {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  double p = 1.0;
  /// Ground-norm order; defaults to p.
  std::optional<double> q;

  double norm_order() const { return q.value_or(p); }

  /// Throws DomainError unless weights are positive and each side sums to 1
  /// within kWeightSumTolerance, atoms share one dimension, p, q >= 1.
  void validate() const;
};

struct OracleSolution {
  double value = 0.0;
  DiscreteCoupling plan;
  /// Dual potentials: u_i + v_j <= c_ij everywhere, with equality on the plan's support.
  std::vector<double> row_potentials;
  std::vector<double> col_potentials;
  /// Largest violation of either certificate condition.
  double certificate_gap = 0.0;
  std::size_t pivots = 0;
};

/// Solves the transportation linear program exactly with the transportation
/// simplex method (north-west corner start, spanning-tree bases, Bland's rule
/// after repeated degenerate pivots) and certifies the result with the
/// recovered dual potentials. Throws CapacityError past max_atoms per side,
/// CertificateError if the certificate fails.
OracleSolution solve_exact(const TransportInstance& instance,
                           std::size_t max_atoms = kDefaultOracleMaxAtoms);

/// All vertices of the transportation polytope {pi >= 0 : pi 1 = mu, pi^T 1 = nu},
/// i.e. basic feasible solutions, without duplicates. Throws CapacityError
/// past kMaxEnumerationAtoms per side.
std::vector<DiscreteCoupling> enumerate_extreme_couplings(const DiscreteMeasure& mu,
                                                          const DiscreteMeasure& nu);

/// Same, with supports 0..m-1 and 0..n-1.
std::vector<DiscreteCoupling> enumerate_extreme_couplings(std::span<const double> mu_weights,
                                                          std::span<const double> nu_weights);

/// The comonotone plan: pairs the cumulative-weight intervals of two sorted
/// discrete measures in order (north-west ladder merge). Equal cumulative
/// weights advance both sides at once.
DiscreteCoupling monotone_plan_1d(const Distribution1D& mu, const Distribution1D& nu);

}  // namespace copula_ot
