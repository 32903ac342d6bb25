#include "copula_ot/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "copula_ot/errors.h"

namespace copula_ot {
namespace {

using Real = long double;

struct Cell {
  std::size_t row;
  std::size_t col;
};

// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr std::size_t kDegenerateLimit = 50;

// Flows this small are roundoff from degenerate bases.
constexpr Real kFlowZero = 1e-15L;

void validate_side(const DiscreteMeasure& m, const char* name) {
  if (m.size() == 0) throw DomainError(std::string(name) + ": empty measure");
  if (m.weights.size() != m.atoms.size()) {
    throw DomainError(std::string(name) + ": atoms and weights differ in length");
  }
  double total = 0.0;
  for (double w : m.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError(std::string(name) + ": weights must be positive and finite");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw DomainError(std::string(name) + ": weights sum to " + std::to_string(total) + ", expected 1");
  }
}

// Flows of the unique tree solution carried by a spanning tree of the
// bipartite row/column graph. Node r < m is row r; node m + c is column c.
// Returns false when the cells do not form a spanning tree.
bool tree_flows(std::size_t m, std::size_t n, std::span<const Cell> cells,
                std::span<const Real> supply, std::span<const Real> demand, std::vector<Real>& flow) {
  const std::size_t nodes = m + n;
  if (cells.size() + 1 != nodes) return false;
  std::vector<std::vector<std::size_t>> incident(nodes);
  for (std::size_t e = 0; e < cells.size(); ++e) {
    incident[cells[e].row].push_back(e);
    incident[m + cells[e].col].push_back(e);
  }
  std::vector<Real> residual(nodes);
  for (std::size_t r = 0; r < m; ++r) residual[r] = supply[r];
  for (std::size_t c = 0; c < n; ++c) residual[m + c] = demand[c];

  std::vector<std::size_t> degree(nodes);
  std::deque<std::size_t> leaves;
  for (std::size_t v = 0; v < nodes; ++v) {
    degree[v] = incident[v].size();
    if (degree[v] == 0) return false;
    if (degree[v] == 1) leaves.push_back(v);
  }
  std::vector<bool> used(cells.size(), false);
  flow.assign(cells.size(), 0.0L);
  std::size_t assigned = 0;
  while (!leaves.empty()) {
    const std::size_t v = leaves.front();
    leaves.pop_front();
    if (degree[v] != 1) continue;
    std::size_t edge = cells.size();
    for (std::size_t e : incident[v]) {
      if (!used[e]) {
        edge = e;
        break;
      }
    }
    if (edge == cells.size()) continue;
    used[edge] = true;
    ++assigned;
    flow[edge] = residual[v];
    const std::size_t other = v < m ? m + cells[edge].col : cells[edge].row;
    residual[other] -= residual[v];
    degree[v] = 0;
    if (--degree[other] == 1) leaves.push_back(other);
  }
  return assigned == cells.size();
}

class TransportationSimplex {
 public:
  explicit TransportationSimplex(const TransportInstance& inst)
      : m_(inst.mu.size()), n_(inst.nu.size()), cost_(m_ * n_), supply_(m_), demand_(n_) {
    const double q = inst.norm_order();
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double c = ground_cost(inst.mu.atoms[i], inst.nu.atoms[j], inst.p, q);
        cost_[i * n_ + j] = c;
        scale_ = std::max(scale_, static_cast<Real>(std::abs(c)));
      }
    }
    for (std::size_t i = 0; i < m_; ++i) supply_[i] = inst.mu.weights[i];
    for (std::size_t j = 0; j < n_; ++j) demand_[j] = inst.nu.weights[j];
    enter_tolerance_ = std::max(1e-11L, 1e-15L * scale_);
  }

  void run() {
    north_west_start();
    recompute();
    std::size_t degenerate_streak = 0;
    bool bland = false;
    const std::size_t max_pivots = 100 * (m_ + n_) * (m_ * n_) + 1000;
    while (true) {
      const std::size_t entering = choose_entering(bland);
      if (entering == kNone) break;
      if (++pivots_ > max_pivots) {
        throw CertificateError("solve_exact: pivot limit exceeded");
      }
      const bool degenerate = pivot(entering);
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
      if (degenerate_streak > kDegenerateLimit) bland = true;
      recompute();
    }
  }

  OracleSolution solution(const TransportInstance& inst) const {
    OracleSolution sol;
    sol.pivots = pivots_;
    sol.plan.row_support = inst.mu.atoms;
    sol.plan.col_support = inst.nu.atoms;
    sol.plan.mass = Matrix(m_, n_);
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      Real f = flow_[e];
      if (f < -1e-12L) throw CertificateError("solve_exact: final basis is infeasible");
      if (f <= kFlowZero) f = 0.0L;
      sol.plan.mass(basis_[e].row, basis_[e].col) = static_cast<double>(f);
    }
    Real value = 0.0L;
    Real gap = 0.0L;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const Real reduced = cost_[i * n_ + j] - u_[i] - v_[j];
        gap = std::max(gap, -reduced);
        if (sol.plan.mass(i, j) > 0.0) {
          gap = std::max(gap, std::abs(reduced));
          value += static_cast<Real>(sol.plan.mass(i, j)) * cost_[i * n_ + j];
        }
      }
    }
    sol.value = static_cast<double>(value);
    sol.certificate_gap = static_cast<double>(gap);
    for (Real u : u_) sol.row_potentials.push_back(static_cast<double>(u));
    for (Real v : v_) sol.col_potentials.push_back(static_cast<double>(v));
    const double tolerance = std::max(kCertificateTolerance, static_cast<double>(1e-14L * scale_));
    if (!(sol.certificate_gap <= tolerance)) {
      throw CertificateError("solve_exact: dual certificate violated by " +
                             std::to_string(sol.certificate_gap));
    }
    return sol;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void north_west_start() {
    basis_.clear();
    in_basis_.assign(m_ * n_, false);
    std::size_t i = 0;
    std::size_t j = 0;
    Real row_left = supply_[0];
    Real col_left = demand_[0];
    while (true) {
      basis_.push_back({i, j});
      in_basis_[i * n_ + j] = true;
      if (i + 1 == m_ && j + 1 == n_) break;
      const bool advance_row = (j + 1 == n_) || (i + 1 < m_ && row_left <= col_left);
      if (advance_row) {
        col_left -= row_left;
        row_left = supply_[++i];
      } else {
        row_left -= col_left;
        col_left = demand_[++j];
      }
    }
  }

  void recompute() {
    if (!tree_flows(m_, n_, basis_, supply_, demand_, flow_)) {
      throw CertificateError("solve_exact: basis is not a spanning tree");
    }
    // Potentials: u_0 = 0 and u_i + v_j = c_ij on the basis.
    u_.assign(m_, 0.0L);
    v_.assign(n_, 0.0L);
    std::vector<std::vector<std::size_t>> incident(m_ + n_);
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      incident[basis_[e].row].push_back(e);
      incident[m_ + basis_[e].col].push_back(e);
    }
    std::vector<bool> seen(m_ + n_, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t e : incident[node]) {
        const Cell cell = basis_[e];
        const Real c = cost_[cell.row * n_ + cell.col];
        if (node < m_ && !seen[m_ + cell.col]) {
          v_[cell.col] = c - u_[cell.row];
          seen[m_ + cell.col] = true;
          queue.push_back(m_ + cell.col);
        } else if (node >= m_ && !seen[cell.row]) {
          u_[cell.row] = c - v_[cell.col];
          seen[cell.row] = true;
          queue.push_back(cell.row);
        }
      }
    }
  }

  std::size_t choose_entering(bool bland) const {
    std::size_t best = kNone;
    Real best_reduced = -enter_tolerance_;
    for (std::size_t k = 0; k < m_ * n_; ++k) {
      if (in_basis_[k]) continue;
      const Real reduced = cost_[k] - u_[k / n_] - v_[k % n_];
      if (reduced < best_reduced) {
        best = k;
        if (bland) return best;
        best_reduced = reduced;
      }
    }
    return best;
  }

  // Returns true when the pivot was degenerate.
  bool pivot(std::size_t entering) {
    const std::size_t row = entering / n_;
    const std::size_t col = entering % n_;

    // Tree path from column `col` back to row `row`.
    std::vector<std::vector<std::size_t>> incident(m_ + n_);
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      incident[basis_[e].row].push_back(e);
      incident[m_ + basis_[e].col].push_back(e);
    }
    std::vector<std::size_t> parent_edge(m_ + n_, kNone);
    std::vector<bool> seen(m_ + n_, false);
    std::deque<std::size_t> queue{row};
    seen[row] = true;
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t e : incident[node]) {
        const std::size_t other = node < m_ ? m_ + basis_[e].col : basis_[e].row;
        if (!seen[other]) {
          seen[other] = true;
          parent_edge[other] = e;
          queue.push_back(other);
        }
      }
    }
    // Edges along the path alternate -, +, -, ... starting at column `col`.
    std::size_t leaving = kNone;
    Real theta = std::numeric_limits<Real>::infinity();
    std::size_t node = m_ + col;
    bool minus = true;
    while (node != row) {
      const std::size_t e = parent_edge[node];
      if (minus) {
        // Ratio test; ties go to the lowest cell index (Bland).
        const Real f = std::max(flow_[e], 0.0L);
        const std::size_t index = basis_[e].row * n_ + basis_[e].col;
        if (leaving == kNone || f < theta - kFlowZero) {
          leaving = e;
          theta = f;
        } else if (f <= theta + kFlowZero &&
                   index < basis_[leaving].row * n_ + basis_[leaving].col) {
          leaving = e;
          theta = std::min(theta, f);
        }
      }
      node = node < m_ ? m_ + basis_[e].col : basis_[e].row;
      minus = !minus;
    }
    if (leaving == kNone) throw CertificateError("solve_exact: no leaving variable");
    in_basis_[basis_[leaving].row * n_ + basis_[leaving].col] = false;
    basis_[leaving] = {row, col};
    in_basis_[entering] = true;
    return theta <= kFlowZero;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<Real> cost_;
  std::vector<Real> supply_;
  std::vector<Real> demand_;
  Real scale_ = 1.0L;
  Real enter_tolerance_ = 1e-11L;

  std::vector<Cell> basis_;
  std::vector<bool> in_basis_;
  std::vector<Real> flow_;
  std::vector<Real> u_;
  std::vector<Real> v_;
  std::size_t pivots_ = 0;
};

}  // namespace

void TransportInstance::validate() const {
  validate_side(mu, "mu");
  validate_side(nu, "nu");
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("transport instance: p must be >= 1");
  if (!(norm_order() >= 1.0)) throw DomainError("transport instance: q must be >= 1");
  const std::size_t d = mu.dim();
  if (d == 0) throw DomainError("transport instance: zero-dimensional atoms");
  for (const auto* side : {&mu, &nu}) {
    for (const Point& x : side->atoms) {
      if (x.size() != d) throw DomainError("transport instance: atoms differ in dimension");
      for (double v : x) {
        if (!std::isfinite(v)) throw DomainError("transport instance: non-finite atom");
      }
    }
  }
}

OracleSolution solve_exact(const TransportInstance& instance, std::size_t max_atoms) {
  if (instance.mu.size() > max_atoms || instance.nu.size() > max_atoms) {
    throw CapacityError("solve_exact: " + std::to_string(instance.mu.size()) + " x " +
                        std::to_string(instance.nu.size()) + " atoms exceeds the guard of " +
                        std::to_string(max_atoms) + " per side");
  }
  instance.validate();
  TransportationSimplex simplex(instance);
  simplex.run();
  return simplex.solution(instance);
}

std::vector<DiscreteCoupling> enumerate_extreme_couplings(const DiscreteMeasure& mu,
                                                          const DiscreteMeasure& nu) {
  if (mu.size() > kMaxEnumerationAtoms || nu.size() > kMaxEnumerationAtoms) {
    throw CapacityError("enumerate_extreme_couplings: at most " +
                        std::to_string(kMaxEnumerationAtoms) + " atoms per side");
  }
  validate_side(mu, "mu");
  validate_side(nu, "nu");
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  const std::size_t cells = m * n;
  const std::vector<Real> supply(mu.weights.begin(), mu.weights.end());
  const std::vector<Real> demand(nu.weights.begin(), nu.weights.end());

  std::vector<DiscreteCoupling> vertices;
  std::vector<Cell> tree;
  std::vector<Real> flow;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << cells); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) + 1 != m + n) continue;
    tree.clear();
    for (std::size_t k = 0; k < cells; ++k) {
      if ((mask >> k) & 1U) tree.push_back({k / n, k % n});
    }
    if (!tree_flows(m, n, tree, supply, demand, flow)) continue;
    if (std::any_of(flow.begin(), flow.end(), [](Real f) { return f < -1e-12L; })) continue;

    Matrix mass(m, n);
    for (std::size_t e = 0; e < tree.size(); ++e) {
      mass(tree[e].row, tree[e].col) = flow[e] <= kFlowZero ? 0.0 : static_cast<double>(flow[e]);
    }
    const bool duplicate = std::any_of(vertices.begin(), vertices.end(), [&](const DiscreteCoupling& v) {
      for (std::size_t k = 0; k < cells; ++k) {
        if (std::abs(v.mass.data()[k] - mass.data()[k]) > 1e-12) return false;
      }
      return true;
    });
    if (!duplicate) vertices.push_back({mu.atoms, nu.atoms, std::move(mass)});
  }
  return vertices;
}

std::vector<DiscreteCoupling> enumerate_extreme_couplings(std::span<const double> mu_weights,
                                                          std::span<const double> nu_weights) {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  for (std::size_t i = 0; i < mu_weights.size(); ++i) {
    mu.atoms.push_back({static_cast<double>(i)});
    mu.weights.push_back(mu_weights[i]);
  }
  for (std::size_t j = 0; j < nu_weights.size(); ++j) {
    nu.atoms.push_back({static_cast<double>(j)});
    nu.weights.push_back(nu_weights[j]);
  }
  return enumerate_extreme_couplings(mu, nu);
}

DiscreteCoupling monotone_plan_1d(const Distribution1D& mu, const Distribution1D& nu) {
  DiscreteCoupling plan;
  for (double x : mu.atoms()) plan.row_support.push_back({x});
  for (double y : nu.atoms()) plan.col_support.push_back({y});
  plan.mass = Matrix(mu.size(), nu.size());
  const Distribution1D* sides[] = {&mu, &nu};
  for_each_ladder_piece(sides, [&](std::span<const std::size_t> index, double width) {
    plan.mass(index[0], index[1]) += width;
  });
  return plan;
}

}  // namespace copula_ot
