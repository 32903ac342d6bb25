#include "copula_ot/copula.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copula_ot/errors.h"

namespace copula_ot {
namespace {

constexpr std::size_t kMaxWitnesses = 8;

void require_dim(std::size_t dim, const char* who) {
  if (dim < 2) throw DomainError(std::string(who) + ": dimension must be >= 2");
}

double lower_bound_w(std::span<const double> u) {
  const double sum = std::accumulate(u.begin(), u.end(), 0.0);
  return std::max(sum - static_cast<double>(u.size()) + 1.0, 0.0);
}

double upper_bound_m(std::span<const double> u) { return *std::min_element(u.begin(), u.end()); }

void record(AxiomResult& result, AxiomViolation violation) {
  result.passed = false;
  ++result.violations;
  if (result.witnesses.size() < kMaxWitnesses) result.witnesses.push_back(std::move(violation));
}

}  // namespace

std::string to_string(CopulaLabel label) {
  switch (label) {
    case CopulaLabel::kM: return "M";
    case CopulaLabel::kW: return "W";
    case CopulaLabel::kPi: return "Pi";
    case CopulaLabel::kCustom: return "custom";
  }
  return "custom";
}

std::string to_string(CopulaAxiom axiom) {
  switch (axiom) {
    case CopulaAxiom::kGrounded: return "grounded";
    case CopulaAxiom::kUniformMargins: return "uniform_margins";
    case CopulaAxiom::kDIncreasing: return "d_increasing";
  }
  return "unknown";
}

CopulaFn::CopulaFn(std::size_t dim, Evaluator eval, CopulaLabel label, bool is_copula)
    : dim_(dim), eval_(std::move(eval)), label_(label), is_copula_(is_copula) {
  require_dim(dim, "CopulaFn");
  if (!eval_) throw DomainError("CopulaFn: missing evaluator");
}

double CopulaFn::operator()(std::span<const double> u) const {
  if (u.size() != dim_) throw DomainError("copula: argument dimension mismatch");
  return eval_(u);
}

CopulaFn m_copula(std::size_t dim) {
  require_dim(dim, "m_copula");
  return CopulaFn(dim, upper_bound_m, CopulaLabel::kM);
}

CopulaFn w_lower(std::size_t dim) {
  require_dim(dim, "w_lower");
  return CopulaFn(dim, lower_bound_w, CopulaLabel::kW, dim == 2);
}

CopulaFn pi_copula(std::size_t dim) {
  require_dim(dim, "pi_copula");
  return CopulaFn(
      dim,
      [](std::span<const double> u) {
        return std::accumulate(u.begin(), u.end(), 1.0, std::multiplies<>());
      },
      CopulaLabel::kPi);
}

CopulaFn custom_copula(std::size_t dim, CopulaFn::Evaluator eval) {
  return CopulaFn(dim, std::move(eval), CopulaLabel::kCustom);
}

std::size_t default_resolution(std::size_t dim) {
  if (dim <= 2) return 16;
  if (dim == 3) return 8;
  return 6;
}

double c_volume(const CopulaFn& c, std::span<const double> lower, std::span<const double> upper) {
  const std::size_t d = c.dim();
  if (lower.size() != d || upper.size() != d) throw DomainError("c_volume: dimension mismatch");
  std::vector<double> corner(d);
  long double volume = 0.0L;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::size_t lows = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const bool high = (mask >> k) & 1U;
      corner[k] = high ? upper[k] : lower[k];
      if (!high) ++lows;
    }
    const double v = c(corner);
    volume += (lows % 2 == 0) ? v : -v;
  }
  return static_cast<double>(volume);
}

ValidationReport validate_copula(const CopulaFn& c, std::size_t resolution) {
  const std::size_t d = c.dim();
  if (d > kMaxValidationDim) {
    throw CapacityError("validate_copula: dimension " + std::to_string(d) + " exceeds guard " +
                        std::to_string(kMaxValidationDim));
  }
  if (resolution < 2) throw DomainError("validate_copula: resolution must be >= 2");

  const std::size_t side = resolution + 1;
  std::size_t nodes = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (nodes > kMaxValidationNodes / side) {
      throw CapacityError("validate_copula: grid too large for dimension and resolution");
    }
    nodes *= side;
  }

  // Tabulate C on every node; node index is mixed radix with axis 0 fastest.
  std::vector<std::size_t> stride(d);
  for (std::size_t k = 0, s = 1; k < d; ++k, s *= side) stride[k] = s;
  auto level = [resolution](std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(resolution);
  };
  auto point_of = [&](std::size_t node) {
    std::vector<double> u(d);
    for (std::size_t k = 0; k < d; ++k) u[k] = level((node / stride[k]) % side);
    return u;
  };

  std::vector<double> table(nodes);
  for (std::size_t node = 0; node < nodes; ++node) table[node] = c(point_of(node));

  ValidationReport report;
  report.dim = d;
  report.resolution = resolution;

  for (std::size_t node = 0; node < nodes; ++node) {
    std::size_t zeros = 0;
    std::size_t ones = 0;
    std::size_t free_axis = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t idx = (node / stride[k]) % side;
      if (idx == 0) ++zeros;
      if (idx == resolution) {
        ++ones;
      } else {
        free_axis = k;
      }
    }
    if (zeros > 0) {
      ++report.grounded.checked;
      if (std::abs(table[node]) > kCopulaTolerance) {
        record(report.grounded, {CopulaAxiom::kGrounded, point_of(node), {}, table[node]});
      }
    }
    if (ones >= d - 1) {
      // All coordinates but (at most) one equal 1.
      ++report.uniform_margins.checked;
      const double expected = ones == d ? 1.0 : level((node / stride[free_axis]) % side);
      const double gap = table[node] - expected;
      if (std::abs(gap) > kCopulaTolerance) {
        record(report.uniform_margins, {CopulaAxiom::kUniformMargins, point_of(node), {}, gap});
      }
    }
  }

  // Boxes between adjacent grid levels; larger grid boxes are sums of these.
  const std::size_t corners = std::size_t{1} << d;
  std::vector<std::ptrdiff_t> offset(corners);
  std::vector<int> sign(corners);
  for (std::size_t mask = 0; mask < corners; ++mask) {
    std::size_t off = 0;
    std::size_t lows = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if ((mask >> k) & 1U) {
        off += stride[k];
      } else {
        ++lows;
      }
    }
    offset[mask] = static_cast<std::ptrdiff_t>(off);
    sign[mask] = (lows % 2 == 0) ? 1 : -1;
  }
  for (std::size_t node = 0; node < nodes; ++node) {
    bool interior = true;
    for (std::size_t k = 0; k < d && interior; ++k) {
      interior = (node / stride[k]) % side < resolution;
    }
    if (!interior) continue;
    ++report.d_increasing.checked;
    long double volume = 0.0L;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      volume += sign[mask] * static_cast<long double>(table[node + static_cast<std::size_t>(offset[mask])]);
    }
    if (volume < -kCopulaTolerance) {
      std::vector<double> lower = point_of(node);
      std::vector<double> upper = point_of(node + static_cast<std::size_t>(offset[corners - 1]));
      record(report.d_increasing,
             {CopulaAxiom::kDIncreasing, std::move(lower), std::move(upper), static_cast<double>(volume)});
    }
  }
  return report;
}

FrechetHoeffdingTriple frechet_hoeffding_bounds(const CopulaFn& c, std::span<const double> u) {
  if (u.size() != c.dim()) throw DomainError("frechet_hoeffding_bounds: dimension mismatch");
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("frechet_hoeffding_bounds: point outside [0,1]^d");
  }
  return {lower_bound_w(u), upper_bound_m(u), c(u)};
}

JointCDF::JointCDF(CopulaFn copula, std::vector<Distribution1D> margins)
    : copula_(std::move(copula)), margins_(std::move(margins)) {
  if (margins_.size() != copula_.dim()) {
    throw DomainError("sklar_join: " + std::to_string(margins_.size()) + " margins for a " +
                      std::to_string(copula_.dim()) + "-copula");
  }
}

double JointCDF::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw DomainError("JointCDF: argument dimension mismatch");
  std::vector<double> u(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == std::numeric_limits<double>::infinity()) {
      u[k] = 1.0;
    } else if (x[k] == -std::numeric_limits<double>::infinity()) {
      u[k] = 0.0;
    } else {
      u[k] = margins_[k].cdf(x[k]);
    }
  }
  return copula_(u);
}

JointCDF sklar_join(const CopulaFn& c, std::vector<Distribution1D> margins) {
  return JointCDF(c, std::move(margins));
}

JointCDF comonotone_joint_2d(const Distribution1D& f, const Distribution1D& g) {
  return sklar_join(m_copula(2), {f, g});
}

DiscreteCoupling coupling_from_joint(const JointCDF& h) {
  if (h.dim() != 2) throw DomainError("coupling_from_joint: joint must be bivariate");
  const Distribution1D& f = h.margins()[0];
  const Distribution1D& g = h.margins()[1];
  if (!f.is_discrete() || !g.is_discrete()) {
    throw DomainError("coupling_from_joint: both margins must be discrete");
  }
  const auto xs = f.atoms();
  const auto ys = g.atoms();
  const std::size_t m = xs.size();
  const std::size_t n = ys.size();

  // corner(i, j) = H(x_{i-1}, y_{j-1}) with index 0 standing for -infinity.
  Matrix corner(m + 1, n + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) corner(i, j) = h({xs[i - 1], ys[j - 1]});
  }

  DiscreteCoupling plan;
  for (double x : xs) plan.row_support.push_back({x});
  for (double y : ys) plan.col_support.push_back({y});
  plan.mass = Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double volume = corner(i + 1, j + 1) - corner(i, j + 1) - corner(i + 1, j) + corner(i, j);
      if (volume < -kCopulaTolerance) {
        throw InvalidJointError("coupling_from_joint: negative mass " + std::to_string(volume) +
                                " at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      plan.mass(i, j) = std::max(volume, 0.0);
    }
  }

  const auto fw = f.weights();
  const auto rows = plan.row_sums();
  for (std::size_t i = 0; i < m; ++i) {
    if (!(rows[i] > 0.0)) throw InvalidJointError("coupling_from_joint: empty row");
    const double scale = fw[i] / rows[i];
    for (std::size_t j = 0; j < n; ++j) plan.mass(i, j) *= scale;
  }
  const auto gw = g.weights();
  const auto cols = plan.col_sums();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(cols[j] - gw[j]) > kMarginTolerance) {
      throw InvalidJointError("coupling_from_joint: joint does not recover the second margin");
    }
  }
  return plan;
}

DiscreteMeasure comonotone_measure(std::span<const Distribution1D> margins) {
  if (margins.empty()) throw DomainError("comonotone_measure: no margins");
  std::vector<const Distribution1D*> ptrs;
  for (const auto& f : margins) ptrs.push_back(&f);
  DiscreteMeasure joint;
  for_each_ladder_piece(ptrs, [&](std::span<const std::size_t> index, double width) {
    Point atom(margins.size());
    for (std::size_t k = 0; k < margins.size(); ++k) atom[k] = margins[k].atoms()[index[k]];
    joint.atoms.push_back(std::move(atom));
    joint.weights.push_back(width);
  });
  return joint;
}

}  // namespace copula_ot
