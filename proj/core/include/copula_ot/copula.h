#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copula_ot/coupling.h"
#include "copula_ot/distribution.h"

namespace copula_ot {

/// Tolerance used by every copula axiom check.
inline constexpr double kCopulaTolerance = 1e-12;

/// Largest dimension accepted by validate_copula (2^d corners per box).
inline constexpr std::size_t kMaxValidationDim = 10;

/// Largest number of grid nodes validate_copula will tabulate.
inline constexpr std::size_t kMaxValidationNodes = std::size_t{1} << 26;

enum class CopulaLabel { kM, kW, kPi, kCustom };

std::string to_string(CopulaLabel label);

/// A candidate d-copula given as a black-box evaluator on [0, 1]^d.
class CopulaFn {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  CopulaFn(std::size_t dim, Evaluator eval, CopulaLabel label, bool is_copula = true);

  std::size_t dim() const { return dim_; }
  CopulaLabel label() const { return label_; }
  /// False only for candidates known not to be copulas (W^d for d > 2).
  bool is_copula() const { return is_copula_; }

  double operator()(std::span<const double> u) const;
  double operator()(std::initializer_list<double> u) const {
    return (*this)(std::span<const double>(u.begin(), u.size()));
  }

 private:
  std::size_t dim_;
  Evaluator eval_;
  CopulaLabel label_;
  bool is_copula_;
};

/// Upper Frechet-Hoeffding bound M^d(u) = min u_i.
CopulaFn m_copula(std::size_t dim);
/// Lower Frechet-Hoeffding bound W^d(u) = max(sum u_i - d + 1, 0); a copula only for d = 2.
CopulaFn w_lower(std::size_t dim);
/// Independence copula Pi^d(u) = prod u_i.
CopulaFn pi_copula(std::size_t dim);
/// A caller-supplied candidate.
CopulaFn custom_copula(std::size_t dim, CopulaFn::Evaluator eval);

enum class CopulaAxiom { kGrounded, kUniformMargins, kDIncreasing };

std::string to_string(CopulaAxiom axiom);

struct AxiomViolation {
  CopulaAxiom axiom;
  /// Grid point for grounded/margin violations; lower corner of the box for
  /// d-increasing violations.
  std::vector<double> point;
  /// Upper corner of the offending box (d-increasing only).
  std::vector<double> box_upper;
  /// Offending value: C(u), C(u) - u_i, or the box's C-volume.
  double value;
};

struct AxiomResult {
  CopulaAxiom axiom;
  bool passed = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  /// First few witnesses, in grid order.
  std::vector<AxiomViolation> witnesses;
};

struct ValidationReport {
  std::size_t dim = 0;
  std::size_t resolution = 0;
  AxiomResult grounded{CopulaAxiom::kGrounded, true, 0, 0, {}};
  AxiomResult uniform_margins{CopulaAxiom::kUniformMargins, true, 0, 0, {}};
  AxiomResult d_increasing{CopulaAxiom::kDIncreasing, true, 0, 0, {}};

  bool passed() const { return grounded.passed && uniform_margins.passed && d_increasing.passed; }
};

/// Default grid resolution per axis: 16 for d = 2, 6 for d >= 4, 8 for d = 3.
std::size_t default_resolution(std::size_t dim);

/// Checks groundedness, uniform margins and d-increasingness on the uniform
/// grid {0, 1/r, ..., 1}^d. Throws CapacityError past kMaxValidationDim or
/// kMaxValidationNodes, DomainError for resolution < 2.
ValidationReport validate_copula(const CopulaFn& c, std::size_t resolution);

/// C-volume of the box [lower, upper] by inclusion-exclusion over its 2^d corners.
double c_volume(const CopulaFn& c, std::span<const double> lower, std::span<const double> upper);

struct FrechetHoeffdingTriple {
  double lower;  // W^d(u)
  double upper;  // M^d(u)
  double value;  // C(u)
};

FrechetHoeffdingTriple frechet_hoeffding_bounds(const CopulaFn& c, std::span<const double> u);

/// H(x_1, ..., x_d) = C(F_1(x_1), ..., F_d(x_d)).
class JointCDF {
 public:
  JointCDF(CopulaFn copula, std::vector<Distribution1D> margins);

  std::size_t dim() const { return copula_.dim(); }
  const CopulaFn& copula() const { return copula_; }
  const std::vector<Distribution1D>& margins() const { return margins_; }

  /// Arguments may be +/-infinity; F(+inf) = 1 and F(-inf) = 0.
  double operator()(std::span<const double> x) const;
  double operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }

 private:
  CopulaFn copula_;
  std::vector<Distribution1D> margins_;
};

JointCDF sklar_join(const CopulaFn& c, std::vector<Distribution1D> margins);

/// sklar_join(M^2, {f, g}).
JointCDF comonotone_joint_2d(const Distribution1D& f, const Distribution1D& g);

/// Mass matrix of a bivariate joint over the atoms of its two discrete
/// margins, by inclusion-exclusion of H over atom rectangles. Volumes below
/// -kCopulaTolerance throw InvalidJointError; smaller negatives are clamped
/// to zero and rows are rescaled to the first margin's weights.
DiscreteCoupling coupling_from_joint(const JointCDF& h);

/// The discrete measure on R^d whose margins are the given discrete
/// distributions and whose copula is M^d: atoms (F_1^{-1}(u), ..., F_d^{-1}(u))
/// over the pieces of the merged cumulative-weight ladder.
DiscreteMeasure comonotone_measure(std::span<const Distribution1D> margins);

}  // namespace copula_ot
