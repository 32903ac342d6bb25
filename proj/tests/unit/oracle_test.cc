#include "copula_ot/oracle.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "copula_ot/errors.h"
#include "support/generators.h"

namespace copula_ot {
namespace {

using testing::Rng;

DiscreteMeasure line_measure(std::vector<double> atoms, std::vector<double> weights) {
  DiscreteMeasure m;
  for (double a : atoms) m.atoms.push_back({a});
  m.weights = std::move(weights);
  return m;
}

DiscreteMeasure random_measure(Rng& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> loc(-10.0, 10.0);
  DiscreteMeasure m;
  for (std::size_t i = 0; i < n; ++i) {
    Point x(dim);
    for (double& v : x) v = loc(rng);
    m.atoms.push_back(x);
  }
  m.weights = testing::random_simplex(rng, n);
  return m;
}

void expect_certified(const TransportInstance& inst, const OracleSolution& sol) {
  const double q = inst.norm_order();
  for (std::size_t i = 0; i < inst.mu.size(); ++i) {
    for (std::size_t j = 0; j < inst.nu.size(); ++j) {
      const double c = ground_cost(inst.mu.atoms[i], inst.nu.atoms[j], inst.p, q);
      const double reduced = c - sol.row_potentials[i] - sol.col_potentials[j];
      const double scale = std::max(1.0, c);
      EXPECT_GE(reduced, -1e-9 * scale);
      if (sol.plan.mass(i, j) > 0.0) {
        EXPECT_LE(std::abs(reduced), 1e-9 * scale);
      }
    }
  }
  EXPECT_LE(sol.certificate_gap, 1e-9 * std::max(1.0, sol.value));
}

TEST(SolveExact, Examples) {
  {
    TransportInstance inst{line_measure({4.0}, {1.0}), line_measure({4.0}, {1.0}), 1.0, {}};
    const auto sol = solve_exact(inst);
    EXPECT_EQ(sol.value, 0.0);
    EXPECT_EQ(sol.plan.mass(0, 0), 1.0);
  }
  {
    TransportInstance inst{line_measure({0.0}, {1.0}), line_measure({3.0}, {1.0}), 2.0, 2.0};
    const auto sol = solve_exact(inst);
    EXPECT_NEAR(sol.value, 9.0, 1e-12);
    EXPECT_EQ(sol.plan.mass(0, 0), 1.0);
  }
  {
    TransportInstance inst{line_measure({0.0, 1.0}, {0.5, 0.5}), line_measure({0.0, 2.0}, {0.5, 0.5}), 1.0,
                           1.0};
    const auto sol = solve_exact(inst);
    EXPECT_NEAR(sol.value, 0.5, 1e-15);
    EXPECT_NEAR(sol.plan.mass(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(sol.plan.mass(1, 1), 0.5, 1e-15);
    EXPECT_EQ(sol.plan.mass(0, 1), 0.0);
    EXPECT_EQ(sol.plan.mass(1, 0), 0.0);
  }
}

TEST(SolveExact, Errors) {
  TransportInstance bad{line_measure({0.0, 1.0}, {0.5, 0.4}), line_measure({0.0}, {1.0}), 1.0, {}};
  EXPECT_THROW(solve_exact(bad), DomainError);
  TransportInstance mixed_dim{line_measure({0.0}, {1.0}), DiscreteMeasure{{{0.0, 1.0}}, {1.0}}, 1.0, {}};
  EXPECT_THROW(solve_exact(mixed_dim), DomainError);
  TransportInstance low_p{line_measure({0.0}, {1.0}), line_measure({1.0}, {1.0}), 0.5, {}};
  EXPECT_THROW(solve_exact(low_p), DomainError);

  Rng rng(31);
  TransportInstance big{random_measure(rng, 65, 1), random_measure(rng, 3, 1), 1.0, {}};
  EXPECT_THROW(solve_exact(big), CapacityError);
  EXPECT_NO_THROW(solve_exact(big, 65));
}

// Feasible 2x2 plans form a one-parameter family in t = mass(0, 0).
TEST(SolveExact, MatchesTwoByTwoParameterScan) {
  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const auto mu = random_measure(rng, 2, 1 + trial % 2);
    const auto nu = random_measure(rng, 2, 1 + trial % 2);
    const double p = trial % 3 == 0 ? 1.0 : (trial % 3 == 1 ? 2.0 : 1.5);
    TransportInstance inst{mu, nu, p, {}};
    const double a = mu.weights[0];
    const double b = nu.weights[0];
    const double lo = std::max(0.0, a + b - 1.0);
    const double hi = std::min(a, b);
    double c[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) c[i][j] = ground_cost(mu.atoms[i], nu.atoms[j], p, p);
    }
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 1000; ++k) {
      const double t = lo + (hi - lo) * k / 1000.0;
      const double cost = t * c[0][0] + (a - t) * c[0][1] + (b - t) * c[1][0] + (1 - a - b + t) * c[1][1];
      best = std::min(best, cost);
    }
    const auto sol = solve_exact(inst);
    EXPECT_NEAR(sol.value, best, 1e-9 * std::max(1.0, best));
    expect_certified(inst, sol);
  }
}

// Uniform n x n margins: the optimum is an assignment (Birkhoff).
TEST(SolveExact, MatchesAssignmentBruteForce) {
  Rng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 3;
    auto mu = random_measure(rng, n, 2);
    auto nu = random_measure(rng, n, 2);
    mu.weights.assign(n, 1.0 / n);
    nu.weights.assign(n, 1.0 / n);
    const double p = trial % 2 == 0 ? 1.0 : 2.0;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (std::size_t i = 0; i < n; ++i) cost += ground_cost(mu.atoms[i], nu.atoms[perm[i]], p, p) / n;
      best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    TransportInstance inst{mu, nu, p, {}};
    const auto sol = solve_exact(inst);
    EXPECT_NEAR(sol.value, best, 1e-10 * std::max(1.0, best));
  }
}

TEST(SolveExact, CertificateAndMarginsOnRandomInstances) {
  Rng rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 12);
    const std::size_t dim = 1 + trial % 3;
    TransportInstance inst{random_measure(rng, size(rng), dim), random_measure(rng, size(rng), dim),
                           trial % 4 == 0 ? 1.0 : 2.0, trial % 5 == 0 ? std::optional<double>(1.0) : std::nullopt};
    const auto sol = solve_exact(inst);
    expect_certified(inst, sol);
    check_margins(sol.plan, inst.mu.weights, inst.nu.weights);
    EXPECT_NEAR(plan_cost(sol.plan, inst.p, inst.norm_order()), sol.value, 1e-10 * std::max(1.0, sol.value));
    const auto rows = marginalize(sol.plan, Side::kRow);
    const auto cols = marginalize(sol.plan, Side::kCol);
    for (std::size_t i = 0; i < inst.mu.size(); ++i) EXPECT_NEAR(rows.weights[i], inst.mu.weights[i], 1e-10);
    for (std::size_t j = 0; j < inst.nu.size(); ++j) EXPECT_NEAR(cols.weights[j], inst.nu.weights[j], 1e-10);
  }
}

TEST(SolveExact, DegenerateLatticeInstances) {
  // Shared atoms and equal weights produce heavily degenerate bases.
  Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    DiscreteMeasure mu;
    DiscreteMeasure nu;
    std::uniform_int_distribution<int> loc(-3, 3);
    for (std::size_t i = 0; i < n; ++i) {
      mu.atoms.push_back({static_cast<double>(loc(rng))});
      nu.atoms.push_back({static_cast<double>(loc(rng))});
    }
    mu.weights.assign(n, 1.0 / n);
    nu.weights.assign(n, 1.0 / n);
    TransportInstance inst{mu, nu, 1.0 + trial % 3, {}};
    const auto sol = solve_exact(inst);
    expect_certified(inst, sol);
  }
}

TEST(SolveExact, PermutationInvariance) {
  Rng rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 10);
    TransportInstance inst{random_measure(rng, size(rng), 2), random_measure(rng, size(rng), 2), 2.0, {}};
    TransportInstance shuffled = inst;
    std::vector<std::size_t> order(inst.mu.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < order.size(); ++k) {
      shuffled.mu.atoms[k] = inst.mu.atoms[order[k]];
      shuffled.mu.weights[k] = inst.mu.weights[order[k]];
    }
    std::reverse(shuffled.nu.atoms.begin(), shuffled.nu.atoms.end());
    std::reverse(shuffled.nu.weights.begin(), shuffled.nu.weights.end());
    const double a = solve_exact(inst).value;
    const double b = solve_exact(shuffled).value;
    EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, a));
  }
}

TEST(EnumerateExtremeCouplings, Examples) {
  const std::vector<double> half{0.5, 0.5};
  const auto two = enumerate_extreme_couplings(half, half);
  ASSERT_EQ(two.size(), 2u);
  bool diagonal = false;
  bool anti = false;
  for (const auto& v : two) {
    diagonal = diagonal || (v.mass(0, 0) == 0.5 && v.mass(1, 1) == 0.5);
    anti = anti || (v.mass(0, 1) == 0.5 && v.mass(1, 0) == 0.5);
  }
  EXPECT_TRUE(diagonal);
  EXPECT_TRUE(anti);

  const std::vector<double> one{1.0};
  const std::vector<double> four{0.1, 0.2, 0.3, 0.4};
  const auto forced = enumerate_extreme_couplings(one, four);
  ASSERT_EQ(forced.size(), 1u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(forced[0].mass(0, j), four[j]);

  const std::vector<double> third(3, 1.0 / 3.0);
  const auto birkhoff = enumerate_extreme_couplings(third, third);
  ASSERT_EQ(birkhoff.size(), 6u);
  std::vector<std::size_t> perm{0, 1, 2};
  do {
    const bool found = std::any_of(birkhoff.begin(), birkhoff.end(), [&](const DiscreteCoupling& v) {
      for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(v.mass(i, perm[i]) - 1.0 / 3.0) > 1e-15) return false;
      }
      return true;
    });
    EXPECT_TRUE(found);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const std::vector<double> five(5, 0.2);
  EXPECT_THROW(enumerate_extreme_couplings(five, half), CapacityError);
}

TEST(EnumerateExtremeCouplings, VerticesAreFeasibleAndDistinct) {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 4);
    const auto mu = testing::random_simplex(rng, size(rng));
    const auto nu = testing::random_simplex(rng, size(rng));
    const auto vertices = enumerate_extreme_couplings(mu, nu);
    ASSERT_FALSE(vertices.empty());
    for (std::size_t a = 0; a < vertices.size(); ++a) {
      check_margins(vertices[a], mu, nu);
      std::size_t support = 0;
      for (double w : vertices[a].mass.data()) support += w > 0.0;
      EXPECT_LE(support, mu.size() + nu.size() - 1);
      for (std::size_t b = 0; b < a; ++b) EXPECT_FALSE(vertices[a].mass == vertices[b].mass);
    }
  }
}

TEST(EnumerateExtremeCouplings, MinimumMatchesSolveExact) {
  Rng rng(38);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 4);
    const std::size_t dim = 1 + trial % 2;
    TransportInstance inst{random_measure(rng, size(rng), dim), random_measure(rng, size(rng), dim),
                           trial % 2 == 0 ? 1.0 : 3.0, {}};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : enumerate_extreme_couplings(inst.mu, inst.nu)) {
      best = std::min(best, plan_cost(v, inst.p, inst.norm_order()));
    }
    EXPECT_NEAR(solve_exact(inst).value, best, 1e-10 * std::max(1.0, best));
  }
}

TEST(Marginalize, Examples) {
  DiscreteCoupling point{{{2.0}}, {{7.0}}, Matrix(1, 1, 1.0)};
  const auto row = marginalize(point, Side::kRow);
  ASSERT_EQ(row.size(), 1u);
  EXPECT_EQ(row.atoms[0][0], 2.0);
  EXPECT_EQ(row.weights[0], 1.0);

  DiscreteCoupling product{{{0.0}, {1.0}}, {{0.0}, {2.0}}, Matrix(2, 2, 0.25)};
  const auto col = marginalize(product, Side::kCol);
  EXPECT_EQ(col.atoms[1][0], 2.0);
  EXPECT_EQ(col.weights[0], 0.5);
  EXPECT_EQ(col.weights[1], 0.5);

  const auto f = Distribution1D::discrete(std::vector<double>{0, 1}, std::vector<double>{0.5, 0.5});
  const auto g = Distribution1D::discrete(std::vector<double>{0, 2}, std::vector<double>{0.5, 0.5});
  const auto back = marginalize(monotone_plan_1d(f, g), Side::kRow);
  EXPECT_EQ(back.weights, testing::to_vector(f.weights()));
}

TEST(Marginalize, OneSidedCostsIntegrateAgainstMargin) {
  Rng rng(39);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = random_measure(rng, 1 + trial % 4, 1);
    const auto nu = random_measure(rng, 1 + trial % 3, 1);
    const auto vertices = enumerate_extreme_couplings(mu, nu);
    const auto plan = testing::random_mixture(rng, vertices);
    double joint = 0.0;
    for (std::size_t i = 0; i < plan.mass.rows(); ++i) {
      for (std::size_t j = 0; j < plan.mass.cols(); ++j) joint += plan.mass(i, j) * std::sin(mu.atoms[i][0]);
    }
    const auto margin = marginalize(plan, Side::kRow);
    double single = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) single += margin.weights[i] * std::sin(margin.atoms[i][0]);
    EXPECT_NEAR(joint, single, 1e-12);
  }
}

TEST(MonotonePlan, Examples) {
  const auto a = Distribution1D::point_mass(1.0);
  const auto b = Distribution1D::point_mass(-4.0);
  EXPECT_EQ(monotone_plan_1d(a, b).mass(0, 0), 1.0);

  const auto u01 = Distribution1D::discrete(std::vector<double>{0, 1}, std::vector<double>{0.5, 0.5});
  const auto u02 = Distribution1D::discrete(std::vector<double>{0, 2}, std::vector<double>{0.5, 0.5});
  const auto diag = monotone_plan_1d(u01, u02);
  EXPECT_EQ(diag.mass(0, 0), 0.5);
  EXPECT_EQ(diag.mass(0, 1), 0.0);
  EXPECT_EQ(diag.mass(1, 0), 0.0);
  EXPECT_EQ(diag.mass(1, 1), 0.5);

  const auto skew = Distribution1D::discrete(std::vector<double>{0, 2}, std::vector<double>{0.25, 0.75});
  const auto ladder = monotone_plan_1d(u01, skew);
  EXPECT_EQ(ladder.mass(0, 0), 0.25);
  EXPECT_EQ(ladder.mass(0, 1), 0.25);
  EXPECT_EQ(ladder.mass(1, 0), 0.0);
  EXPECT_EQ(ladder.mass(1, 1), 0.5);
}

TEST(MonotonePlan, AttainsOracleValue) {
  Rng rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = testing::random_discrete(rng, 12);
    const auto g = testing::random_discrete(rng, 12);
    const double p = std::array{1.0, 1.5, 2.0, 3.0}[trial % 4];
    const auto plan = monotone_plan_1d(f, g);
    check_margins(plan, f.weights(), g.weights());
    const double oracle = solve_exact({as_measure(f), as_measure(g), p, {}}).value;
    EXPECT_NEAR(testing::brute_plan_expectation(plan, p), oracle, 1e-9 * std::max(1.0, oracle));
  }
}

}  // namespace
}  // namespace copula_ot
