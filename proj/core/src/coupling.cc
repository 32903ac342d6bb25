#include "copula_ot/coupling.h"

#include <cmath>
#include <string>

#include "copula_ot/errors.h"

namespace copula_ot {

DiscreteMeasure as_measure(const Distribution1D& dist) {
  DiscreteMeasure m;
  for (double a : dist.atoms()) m.atoms.push_back({a});
  const auto w = dist.weights();
  m.weights.assign(w.begin(), w.end());
  return m;
}

std::vector<double> DiscreteCoupling::row_sums() const {
  std::vector<double> sums(mass.rows(), 0.0);
  for (std::size_t i = 0; i < mass.rows(); ++i) {
    for (std::size_t j = 0; j < mass.cols(); ++j) sums[i] += mass(i, j);
  }
  return sums;
}

std::vector<double> DiscreteCoupling::col_sums() const {
  std::vector<double> sums(mass.cols(), 0.0);
  for (std::size_t i = 0; i < mass.rows(); ++i) {
    for (std::size_t j = 0; j < mass.cols(); ++j) sums[j] += mass(i, j);
  }
  return sums;
}

double DiscreteCoupling::total_mass() const {
  double total = 0.0;
  for (double m : mass.data()) total += m;
  return total;
}

void DiscreteCoupling::check_shape() const {
  if (row_support.size() != mass.rows() || col_support.size() != mass.cols()) {
    throw DomainError("coupling: support sizes do not match the mass matrix");
  }
  if (row_support.empty() || col_support.empty()) throw DomainError("coupling: empty support");
  const std::size_t d = row_support.front().size();
  if (d == 0) throw DomainError("coupling: zero-dimensional support points");
  for (const auto* side : {&row_support, &col_support}) {
    for (const Point& x : *side) {
      if (x.size() != d) throw DomainError("coupling: support points differ in dimension");
      for (double v : x) {
        if (!std::isfinite(v)) throw DomainError("coupling: non-finite support point");
      }
    }
  }
  for (double m : mass.data()) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("coupling: negative or non-finite mass");
  }
}

void check_margins(const DiscreteCoupling& plan, std::span<const double> mu_weights,
                   std::span<const double> nu_weights) {
  plan.check_shape();
  if (mu_weights.size() != plan.mass.rows() || nu_weights.size() != plan.mass.cols()) {
    throw DomainError("coupling: margin sizes do not match the plan");
  }
  const auto rows = plan.row_sums();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i] - mu_weights[i]) > kMarginTolerance) {
      throw DomainError("coupling: row " + std::to_string(i) + " sums to " +
                        std::to_string(rows[i]) + ", expected " + std::to_string(mu_weights[i]));
    }
  }
  const auto cols = plan.col_sums();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (std::abs(cols[j] - nu_weights[j]) > kMarginTolerance) {
      throw DomainError("coupling: column " + std::to_string(j) + " sums to " +
                        std::to_string(cols[j]) + ", expected " + std::to_string(nu_weights[j]));
    }
  }
}

DiscreteMeasure marginalize(const DiscreteCoupling& plan, Side side) {
  if (side == Side::kRow) return {plan.row_support, plan.row_sums()};
  return {plan.col_support, plan.col_sums()};
}

double ground_cost(std::span<const double> x, std::span<const double> y, double p, double q) {
  if (x.size() != y.size()) throw DomainError("ground_cost: dimension mismatch");
  if (x.size() == 1) return std::pow(std::abs(x[0] - y[0]), p);
  if (q == p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sum += std::pow(std::abs(x[k] - y[k]), p);
    return sum;
  }
  double norm_q = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) norm_q += std::pow(std::abs(x[k] - y[k]), q);
  return std::pow(norm_q, p / q);
}

double plan_cost(const DiscreteCoupling& plan, double p, double q) {
  plan.check_shape();
  long double total = 0.0L;
  for (std::size_t i = 0; i < plan.mass.rows(); ++i) {
    for (std::size_t j = 0; j < plan.mass.cols(); ++j) {
      if (plan.mass(i, j) == 0.0) continue;
      total += static_cast<long double>(plan.mass(i, j)) *
               ground_cost(plan.row_support[i], plan.col_support[j], p, q);
    }
  }
  return static_cast<double>(total);
}

DiscreteCoupling independent_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  DiscreteCoupling plan{mu.atoms, nu.atoms, Matrix(mu.size(), nu.size())};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) plan.mass(i, j) = mu.weights[i] * nu.weights[j];
  }
  return plan;
}

}  // namespace copula_ot
