#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copula_ot/distribution.h"

namespace copula_ot {

/// A point of R^d.
using Point = std::vector<double>;

/// Tolerance on coupling margins and total mass.
inline constexpr double kMarginTolerance = 1e-10;

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Finite discrete measure on R^d: atoms with nonnegative weights.
struct DiscreteMeasure {
  std::vector<Point> atoms;
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
  std::size_t dim() const { return atoms.empty() ? 0 : atoms.front().size(); }
};

/// The discrete measure of a discrete Distribution1D, as points of R^1.
DiscreteMeasure as_measure(const Distribution1D& dist);

/// A transport plan between two finite measures: mass(i, j) is moved from
/// row_support[i] to col_support[j].
struct DiscreteCoupling {
  std::vector<Point> row_support;
  std::vector<Point> col_support;
  Matrix mass;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  double total_mass() const;

  /// Throws DomainError unless entries are >= 0 and the supports match the
  /// matrix shape with a common dimension.
  void check_shape() const;
};

/// Throws DomainError unless the plan's margins are mu and nu within
/// kMarginTolerance (same atom order).
void check_margins(const DiscreteCoupling& plan, std::span<const double> mu_weights,
                   std::span<const double> nu_weights);

enum class Side { kRow, kCol };

/// The requested margin of a plan. Atoms follow the plan's support order.
DiscreteMeasure marginalize(const DiscreteCoupling& plan, Side side);

/// ||x - y||_q^p.
double ground_cost(std::span<const double> x, std::span<const double> y, double p, double q);

/// sum_ij mass(i, j) * ||x_i - y_j||_q^p.
double plan_cost(const DiscreteCoupling& plan, double p, double q);

/// The product plan mu (x) nu.
DiscreteCoupling independent_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace copula_ot
