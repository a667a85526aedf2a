#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "weakmorrey/holder.hpp"

using namespace weakmorrey;

namespace {

SearchConfig fast() {
  SearchConfig c;
  c.radius_grid = 48;
  c.center_grid = 6;
  c.polish_evaluations = 60;
  return c;
}

double closed_form(const std::vector<double>& a, const std::vector<double>& p, double theta) {
  const double ps = harmonic_conjugate(p);
  double v = std::pow(theta, -ps);
  for (std::size_t j = 0; j < a.size(); ++j) v *= std::pow(p[j] / ps, ps / p[j]) * std::pow(a[j], ps / p[j]);
  return v;
}

// Minimum of sum a_i y_i^{p_i} over a log-grid of y_1..y_{m-1}, with y_m
// forced by prod y_i = 1/theta.
double grid_min(const std::vector<double>& a, const std::vector<double>& p, double theta, int per_axis) {
  const std::size_t m = a.size();
  const double lo = -12, hi = 12;
  double best = kInf;
  std::vector<int> idx(m - 1, 0);
  while (true) {
    double obj = 0, log_rest = -std::log(theta);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double t = lo + (hi - lo) * idx[i] / (per_axis - 1);
      obj += a[i] * std::exp(p[i] * t);
      log_rest -= t;
    }
    obj += a[m - 1] * std::exp(p[m - 1] * log_rest);
    best = std::min(best, obj);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return best;
}

}  // namespace

TEST(OptimalSplit, EqualWeights) {
  const auto s = optimal_split({1, 1}, {2, 2}, 1);
  EXPECT_NEAR(s.lambda, 2, 1e-14);
  EXPECT_NEAR(s.y[0], 1, 1e-14);
  EXPECT_NEAR(s.y[1], 1, 1e-14);
  EXPECT_NEAR(s.objective, 2, 1e-14);
  EXPECT_NEAR(s.closed_form_bound, 2, 1e-14);
}

TEST(OptimalSplit, UnequalWeights) {
  const auto s = optimal_split({1, 4}, {2, 2}, 1);
  EXPECT_NEAR(s.lambda, 4, 1e-14);
  EXPECT_NEAR(s.y[0], std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(s.y[1], 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(s.objective, 4, 1e-13);
}

TEST(OptimalSplit, SingleFactorIsForced) {
  const auto s = optimal_split({2.5}, {3}, 1.7);
  EXPECT_NEAR(s.y[0], 1 / 1.7, 1e-15);
  EXPECT_NEAR(s.objective, 2.5 * std::pow(1.7, -3), 1e-14);
}

TEST(OptimalSplit, GridOracle) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> ua(-3, 3), up(0, 1), ut(-2, 2);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + t % 2;
    std::vector<double> a(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = std::exp(ua(rng));
      p[i] = 1 + 6 * up(rng);
    }
    const double theta = std::exp(ut(rng));
    const auto s = optimal_split(a, p, theta);
    const double g = grid_min(a, p, theta, m == 2 ? 20001 : 801);
    EXPECT_GE(s.objective, 0);
    EXPECT_LE(s.objective, g * (1 + 1e-10));
    EXPECT_GE(s.objective, g * (1 - 1e-2)) << "grid should come close to the minimum";
  }
}

TEST(OptimalSplit, ObjectiveIdentityAndConstraint) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> ua(-5, 5), up(0, 1), ut(-3, 3);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t m = 1 + t % 5;
    std::vector<double> a(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = std::exp(ua(rng));
      p[i] = 1 + 10 * up(rng);
    }
    const double theta = std::exp(ut(rng));
    const auto s = optimal_split(a, p, theta);
    const double want = closed_form(a, p, theta);
    EXPECT_NEAR(s.objective, want, 1e-10 * want);
    EXPECT_NEAR(s.closed_form_bound, want, 1e-10 * want);
    EXPECT_NEAR(s.constraint_product, 1.0, 1e-10);
    double prod = theta;
    for (double y : s.y) prod *= y;
    EXPECT_NEAR(prod, 1.0, 1e-10);
  }
}

TEST(OptimalSplit, EqualShareMatchesForEqualExponents) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> ua(-3, 3), up(1, 8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + t % 4;
    const double pe = up(rng);
    std::vector<double> a(m), p(m, pe);
    for (auto& x : a) x = std::exp(ua(rng));
    const auto s = optimal_split(a, p, 0.3 + t * 0.01);
    EXPECT_TRUE(s.equal_share_feasible);
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(s.equal_share_y[i], s.y[i], 1e-10 * s.y[i]);
    EXPECT_NEAR(s.equal_share_predicted_factor, 1.0, 1e-12);
  }
}

TEST(OptimalSplit, EqualShareMissesTheConstraintForMixedExponents) {
  // m^{-1/p*} prod (p_j/p*)^{1/p_j} with p = (3, 1.5), p* = 1.
  const auto s = optimal_split({1, 1}, {3, 1.5}, 1);
  const double want = 0.5 * std::pow(3.0, 1.0 / 3) * std::pow(1.5, 2.0 / 3);
  EXPECT_NEAR(s.equal_share_predicted_factor, want, 1e-12);
  EXPECT_NEAR(s.equal_share_constraint_product, want, 1e-10 * want);
  EXPECT_LT(s.equal_share_constraint_product, 1.0);
  EXPECT_FALSE(s.equal_share_feasible);
  EXPECT_THROW(union_bound_check({power(1, 1.0 / 3, {0.0}), power(1, 2.0 / 3, {0.0})}, Ball({0.0}, 1), 1,
                                 s.equal_share_y),
               constraint_violation);
}

TEST(OptimalSplit, Errors) {
  EXPECT_THROW(optimal_split({1, 0}, {2, 2}, 1), degenerate_factor);
  EXPECT_THROW(optimal_split({1, 1}, {2, 2}, 0), input_error);
  EXPECT_THROW(optimal_split({1}, {2, 2}, 1), input_error);
  EXPECT_THROW(optimal_split({1, 1}, {0.5, 2}, 1), invalid_exponent);
}

TEST(UnionBound, WorkedPowerCase) {
  const auto f = power(1, 0.5, {0.0});
  const auto rep = union_bound_check({f, f}, Ball({0.0}, 1), 4, {0.5, 0.5});
  EXPECT_EQ(rep.lhs, 0.5);
  EXPECT_EQ(rep.rhs, 1.0);
  EXPECT_EQ(rep.thresholds, (std::vector<double>{2, 2}));
  EXPECT_EQ(rep.method, Method::analytic);
  EXPECT_TRUE(rep.verdict);
}

TEST(UnionBound, ThetaAboveTheSup) {
  const auto f = indicator(2, Ball({0.0, 0.0}, 1));
  const auto rep = union_bound_check({f, f}, Ball({0.0, 0.0}, 3), 5, {1, 1});
  EXPECT_EQ(rep.lhs, 0.0);
  EXPECT_TRUE(rep.verdict);
}

TEST(UnionBound, RejectsUnsoundSplits) {
  const auto f = power(1, 0.5, {0.0});
  EXPECT_THROW(union_bound_check({f, f}, Ball({0.0}, 1), 4, {0.5, 0.4}), constraint_violation);
  EXPECT_THROW(union_bound_check({f}, Ball({0.0}, 1), 4, {0.5, 0.5}), input_error);
}

TEST(UnionBound, HoldsForOptimalSplitsProperty) {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> u(0.2, 2), uc(-1, 1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 3, m = 2 + t % 2;
    std::vector<FunctionExpr> fs;
    std::vector<double> a, p;
    Point c(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      fs.push_back(t % 4 == 0 ? indicator(u(rng), Ball(c, u(rng)))
                              : product({power(u(rng), u(rng), c), step(c, {u(rng), 2 + u(rng)}, {2, 1})}));
      a.push_back(u(rng));
      p.push_back(1 + 3 * u(rng));
    }
    Point bc(n);
    for (auto& x : bc) x = uc(rng);
    const auto s = optimal_split(a, p, u(rng));
    const auto rep = union_bound_check(fs, Ball(bc, u(rng)), s.theta, s.y);
    EXPECT_TRUE(rep.verdict) << rep.lhs << " " << rep.rhs;
  }
}

TEST(UnionBound, MonteCarloForSplitCenters) {
  const std::vector<FunctionExpr> fs{indicator(2, Ball({0.0}, 1)), indicator(2, Ball({0.5}, 1))};
  SearchConfig cfg;
  cfg.mc_samples = 100000;
  const auto rep = union_bound_check(fs, Ball({0.0}, 2), 3, {0.5, 1.0}, cfg);
  EXPECT_EQ(rep.method, Method::monte_carlo);
  EXPECT_TRUE(rep.verdict);
  // Exact: lhs = |(-0.5, 1)| = 1.5, rhs = 2 + 2.
  EXPECT_NEAR(rep.lhs, 1.5, 4 * 4 * std::sqrt(0.375 * 0.625 / 1e5));
}

TEST(CheckHolder, EqualExponents) {
  const auto f = power(1, 0.5, {0.0});
  const ExponentSystem sys({{2, 2}, {2, 2}}, {1, 1});
  const auto rep = check_holder({f, f}, sys, fast());
  EXPECT_NEAR(rep.factor_norms[0].value, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(rep.lhs.value, 2, 1e-9);
  EXPECT_NEAR(rep.ratio, 1, 1e-9);
  EXPECT_NEAR(rep.c_new, 2, 1e-14);
  EXPECT_TRUE(rep.verdict);
  EXPECT_TRUE(rep.pstar_verdict);
  EXPECT_TRUE(rep.inclusion_holds);
}

TEST(CheckHolder, MixedExponentsNeedPInsideQ) {
  // p_1 = 3 > q_1 = 2 is not a Morrey pair.
  EXPECT_THROW(ExponentSystem({{3, 2}, {1.5, 2}}, {1, 1}), invalid_exponent);
  // With q_i = p_i the pair is valid; |x|^{-1/3} and |x|^{-2/3} have norms
  // 2^{1/3} and 2^{2/3}, and their product |x|^{-1} has norm 2.
  const ExponentSystem sys({{3, 3}, {1.5, 1.5}}, {1, 1});
  const auto rep = check_holder({power(1, 1.0 / 3, {0.0}), power(1, 2.0 / 3, {0.0})}, sys, fast());
  EXPECT_NEAR(rep.factor_norms[0].value, std::cbrt(2.0), 1e-9);
  EXPECT_NEAR(rep.factor_norms[1].value, std::cbrt(4.0), 1e-9);
  EXPECT_NEAR(rep.ratio, 1, 1e-9);
  EXPECT_NEAR(rep.c_new, 1.8898815748423097, 1e-12);
  EXPECT_TRUE(rep.verdict);
}

TEST(CheckHolder, ZeroFactor) {
  const ExponentSystem sys({{2, 2}, {2, 2}}, {1, 1});
  const auto rep = check_holder({power(1, 0.5, {0.0}), step({0.0}, {1}, {0})}, sys, fast());
  EXPECT_EQ(rep.lhs.value, 0.0);
  EXPECT_EQ(rep.ratio, 0.0);
  EXPECT_TRUE(rep.verdict);
}

TEST(CheckHolder, NotInSpaceNamesTheFactor) {
  const ExponentSystem sys({{2, 2}, {2, 2}}, {1, 1});
  try {
    check_holder({power(1, 0.5, {0.0}), power(1, 0.8, {0.0})}, sys, fast());
    FAIL();
  } catch (const not_in_space& e) {
    EXPECT_EQ(e.factor(), 2u);
  }
}

TEST(CheckHolder, LengthMismatch) {
  const ExponentSystem sys({{2, 2}, {2, 2}}, {1, 1});
  EXPECT_THROW(check_holder({power(1, 0.5, {0.0})}, sys, fast()), input_error);
}

// Random co-centered tuples in their spaces: the inequality holds with C_new,
// hence with the weaker constants, and rescaling a factor changes nothing.
TEST(CheckHolder, RandomTuplesProperty) {
  std::mt19937_64 rng(75);
  std::uniform_real_distribution<double> u(0, 1), ua(0.3, 3);
  for (int t = 0; t < 24; ++t) {
    const std::size_t n = 1 + t % 3, m = 2 + t % 2;
    std::vector<ExponentPair> pairs;
    double inv_p = 0, inv_q = 0;
    do {
      pairs.clear();
      inv_p = inv_q = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double p = 1.5 + 4 * u(rng);
        const double q = p * (1 + u(rng));
        pairs.push_back({p, q});
        inv_p += 1 / p;
        inv_q += 1 / q;
      }
    } while (inv_p > 1);
    const double q = 1 / inv_q, p_star = 1 / inv_p;
    const ExponentSystem sys(pairs, {1 + (p_star - 1) * u(rng), q});
    std::vector<FunctionExpr> fs;
    const Point c(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = ua(rng);
      fs.push_back(t % 3 == 0 ? power(ua(rng), n / pairs[i].q, c)
                              : product({power(ua(rng), n / pairs[i].q, c), step(c, {r, 2 * r}, {2, 1})}));
    }
    const auto rep = check_holder(fs, sys, fast());
    EXPECT_TRUE(rep.verdict) << t;
    EXPECT_TRUE(rep.pstar_verdict) << t;
    EXPECT_TRUE(rep.inclusion_holds) << t;
    EXPECT_LE(rep.ratio, rep.c_new * (1 + 1e-9)) << t;
    EXPECT_LE(rep.c_new, rep.c_mid * (1 + 1e-12));
    EXPECT_LE(rep.c_mid, rep.c_old * (1 + 1e-12));

    auto scaled = fs;
    scaled[0] = scale(scaled[0], 3.7);
    const auto rep2 = check_holder(scaled, sys, fast());
    EXPECT_EQ(rep2.verdict, rep.verdict);
    EXPECT_NEAR(rep2.ratio, rep.ratio, 1e-6 * rep.ratio);
  }
}
