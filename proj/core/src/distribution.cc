#include "copula_ot/distribution.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "copula_ot/errors.h"
#include "copula_ot/quadrature.h"

namespace copula_ot {

Distribution1D Distribution1D::discrete(std::span<const Atom> atoms) {
  if (atoms.empty()) throw ConstructionError("discrete distribution needs at least one atom");
  std::vector<Atom> sorted(atoms.begin(), atoms.end());
  double total = 0.0;
  for (const Atom& a : sorted) {
    if (!std::isfinite(a.location)) throw ConstructionError("atom location is not finite");
    if (!std::isfinite(a.weight) || a.weight <= 0.0) {
      throw ConstructionError("atom weight must be finite and strictly positive");
    }
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw ConstructionError("atom weights sum to " + std::to_string(total) + ", expected 1");
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Atom& a, const Atom& b) { return a.location < b.location; });

  Distribution1D d;
  d.kind_ = DistributionKind::kDiscrete;
  for (const Atom& a : sorted) {
    if (!d.atoms_.empty() && d.atoms_.back() == a.location) {
      d.weights_.back() += a.weight;
    } else {
      d.atoms_.push_back(a.location);
      d.weights_.push_back(a.weight);
    }
  }
  for (double& w : d.weights_) w /= total;
  d.cumulative_.resize(d.weights_.size());
  std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cumulative_.begin());
  d.cumulative_.back() = 1.0;
  return d;
}

Distribution1D Distribution1D::discrete(std::span<const double> locations,
                                        std::span<const double> weights) {
  if (locations.size() != weights.size()) {
    throw ConstructionError("locations and weights differ in length");
  }
  std::vector<Atom> atoms(locations.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = {locations[i], weights[i]};
  return discrete(atoms);
}

Distribution1D Distribution1D::point_mass(double location) {
  const Atom atom{location, 1.0};
  return discrete(std::span<const Atom>(&atom, 1));
}

Distribution1D Distribution1D::parametric(ParametricSpec spec) {
  if (!spec.quantile || !spec.cdf) {
    throw ConstructionError("parametric distribution needs both quantile and cdf evaluators");
  }
  if (!(spec.moment_order >= 1.0)) {
    throw ConstructionError("parametric distribution moment order must be >= 1");
  }
  Distribution1D d;
  d.kind_ = DistributionKind::kParametricQuantile;
  d.moment_order_ = spec.moment_order;
  d.parametric_ = std::make_shared<const ParametricSpec>(std::move(spec));
  return d;
}

void Distribution1D::require_discrete(const char* what) const {
  if (!is_discrete()) throw DomainError(std::string(what) + ": distribution is not discrete");
}

std::span<const double> Distribution1D::atoms() const {
  require_discrete("atoms");
  return atoms_;
}

std::span<const double> Distribution1D::weights() const {
  require_discrete("weights");
  return weights_;
}

std::span<const double> Distribution1D::cumulative() const {
  require_discrete("cumulative");
  return cumulative_;
}

const ParametricSpec& Distribution1D::parametric_spec() const {
  if (is_discrete()) throw DomainError("parametric_spec: distribution is discrete");
  return *parametric_;
}

double Distribution1D::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: x is NaN");
  if (!is_discrete()) return std::clamp(parametric_->cdf(x), 0.0, 1.0);
  const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

ExtendedReal Distribution1D::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("quantile: level must lie in (0, 1]");
  if (!is_discrete()) {
    const double q = parametric_->quantile(u);
    if (std::isnan(q)) throw DomainError("quantile: parametric evaluator returned NaN");
    if (q == std::numeric_limits<double>::infinity()) return ExtendedReal::positive_infinity();
    if (q == -std::numeric_limits<double>::infinity()) return ExtendedReal::negative_infinity();
    return ExtendedReal::finite(q);
  }
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(),
                                   u - kQuantileTieTolerance);
  if (it == cumulative_.end()) return ExtendedReal::positive_infinity();
  return ExtendedReal::finite(atoms_[static_cast<std::size_t>(it - cumulative_.begin())]);
}

Distribution1D from_samples(std::span<const double> samples) {
  if (samples.empty()) throw ConstructionError("from_samples: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted) {
    if (!std::isfinite(x)) throw ConstructionError("from_samples: non-finite sample");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    atoms.push_back({sorted[i], static_cast<double>(j - i) / n});
    i = j;
  }
  Distribution1D d = Distribution1D::discrete(atoms);
  d.kind_ = DistributionKind::kEmpirical;
  return d;
}

double p_moment(const Distribution1D& dist, double p) {
  if (!(p >= 1.0)) throw DomainError("p_moment: p must be >= 1");
  if (dist.is_discrete()) {
    const auto atoms = dist.atoms();
    const auto weights = dist.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) sum += weights[i] * std::pow(std::abs(atoms[i]), p);
    return sum;
  }
  const ParametricSpec& spec = dist.parametric_spec();
  auto integrand = [&](double u) { return std::pow(std::abs(spec.quantile(u)), p); };
  std::optional<double> tail;
  if (spec.tail_bound) tail = spec.tail_bound(p, kQuantileEndpointCut);
  return integrate_unit_interval(integrand, {}, tail).value;
}

std::vector<TailDiagnosticRow> tail_decay_diagnostic(const Distribution1D& dist, double r,
                                                     std::span<const double> grid) {
  if (!(r > 0.0)) throw DomainError("tail_decay_diagnostic: r must be > 0");
  std::vector<TailDiagnosticRow> rows;
  rows.reserve(grid.size());
  double previous = 0.0;
  for (double x : grid) {
    if (!(x > previous) || !std::isfinite(x)) {
      throw DomainError("tail_decay_diagnostic: grid must be finite, positive and increasing");
    }
    previous = x;
    const double scale = std::pow(x, r);
    rows.push_back({x, scale * (1.0 - dist.cdf(x)), scale * dist.cdf(-x)});
  }
  return rows;
}

std::vector<std::pair<double, double>> comonotone_pushforward(const Distribution1D& f,
                                                              const Distribution1D& g,
                                                              std::size_t n) {
  if (n == 0) throw DomainError("comonotone_pushforward: n must be >= 1");
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double u = (static_cast<double>(k) - 0.5) / static_cast<double>(n);
    pairs.emplace_back(f.quantile(u).raw(), g.quantile(u).raw());
  }
  return pairs;
}

void for_each_ladder_piece(
    std::span<const Distribution1D* const> margins,
    const std::function<void(std::span<const std::size_t> index, double width)>& visit) {
  if (margins.empty()) throw DomainError("for_each_ladder_piece: no margins");
  for (const Distribution1D* f : margins) {
    if (f == nullptr || !f->is_discrete()) {
      throw DomainError("for_each_ladder_piece: margins must be discrete");
    }
  }
  std::vector<std::size_t> index(margins.size(), 0);
  double previous = 0.0;
  while (true) {
    double next = 1.0;
    for (std::size_t k = 0; k < margins.size(); ++k) {
      next = std::min(next, margins[k]->cumulative()[index[k]]);
    }
    visit(index, next - previous);
    previous = next;
    bool done = false;
    for (std::size_t k = 0; k < margins.size(); ++k) {
      if (margins[k]->cumulative()[index[k]] - next <= kQuantileTieTolerance) {
        if (++index[k] == margins[k]->size()) done = true;
      }
    }
    if (done) return;
  }
}

namespace distributions {

Distribution1D normal(double mean, double stddev) {
  if (!std::isfinite(mean) || !(stddev > 0.0) || !std::isfinite(stddev)) {
    throw ConstructionError("normal: need finite mean and positive finite stddev");
  }
  const boost::math::normal_distribution<double> law(mean, stddev);
  ParametricSpec spec;
  spec.label = "normal";
  spec.quantile = [law](double u) {
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return boost::math::quantile(law, u);
  };
  spec.cdf = [law](double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return boost::math::cdf(law, x);
  };
  spec.moment_order = std::numeric_limits<double>::infinity();
  return Distribution1D::parametric(std::move(spec));
}

Distribution1D uniform(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw ConstructionError("uniform: need finite lower < upper");
  }
  ParametricSpec spec;
  spec.label = "uniform";
  spec.quantile = [=](double u) { return lower + u * (upper - lower); };
  spec.cdf = [=](double x) { return std::clamp((x - lower) / (upper - lower), 0.0, 1.0); };
  spec.moment_order = std::numeric_limits<double>::infinity();
  return Distribution1D::parametric(std::move(spec));
}

Distribution1D exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ConstructionError("exponential: rate must be positive and finite");
  }
  ParametricSpec spec;
  spec.label = "exponential";
  spec.quantile = [=](double u) { return -std::log1p(-u) / rate; };
  spec.cdf = [=](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
  spec.moment_order = std::numeric_limits<double>::infinity();
  return Distribution1D::parametric(std::move(spec));
}

}  // namespace distributions

}  // namespace copula_ot
