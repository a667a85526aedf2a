#pragma once

// Generalized Hölder inequality in weak Morrey spaces, built the way the
// constructive argument runs:
//
//  1. On a ball B and for thresholds whose product is theta,
//       |{prod f_i > theta}| <= sum_i |{f_i > 1/y_i}|   when prod y_i >= 1/theta.
//  2. Each term is at most a_i y_i^{p_i} with a_i = ||f_i||_{L^{p_i,inf}(B)}^{p_i}.
//  3. Minimizing sum a_i y_i^{p_i} subject to prod y_i = 1/theta gives
//       theta^{-p*} prod (p_j/p*)^{p*/p_j} a_j^{p*/p_j}.
//  4. Taking sups over B and theta bounds the wM^{p*}_q norm of the product,
//     and inclusion (p <= p*) bounds the wM^p_q norm.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "weakmorrey/bounds.hpp"
#include "weakmorrey/error.hpp"
#include "weakmorrey/functions.hpp"
#include "weakmorrey/parallel.hpp"
#include "weakmorrey/quasinorm.hpp"

namespace weakmorrey {

inline constexpr double kSplitRelTol = 1e-10;

struct ThresholdSplit {
  std::vector<double> a;
  std::vector<double> p;
  double theta = 1.0;
  double p_star = 1.0;
  double lambda = 0.0;
  std::vector<double> y;
  double objective = 0.0;
  // theta^{-p*} prod (p_j/p*)^{p*/p_j} a_j^{p*/p_j}
  double closed_form_bound = 0.0;
  // theta * prod y_i; 1 for a feasible split.
  double constraint_product = 0.0;

  // The alternative choice y_i^{p_i} = bound / (m a_i), which gives every term
  // of the sum the same share. It meets the constraint only when all p_i are
  // equal; otherwise theta * prod y_i equals m^{-1/p*} prod (p_j/p*)^{1/p_j}.
  std::vector<double> equal_share_y;
  double equal_share_objective = 0.0;
  double equal_share_constraint_product = 0.0;
  double equal_share_predicted_factor = 0.0;
  bool equal_share_feasible = false;

  friend bool operator==(const ThresholdSplit&, const ThresholdSplit&) = default;
};

inline ThresholdSplit optimal_split(const std::vector<double>& a, const std::vector<double>& p, double theta) {
  if (a.size() != p.size() || a.empty()) throw input_error("split: a and p must be non-empty and of equal length");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw input_error("split: theta must be positive and finite");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0)
      throw degenerate_factor("split: a_" + std::to_string(i + 1) + " = 0 (factor vanishes on the ball)");
    if (!(a[i] > 0.0) || !std::isfinite(a[i])) throw input_error("split: a_i must be positive and finite");
  }
  ThresholdSplit s;
  s.a = a;
  s.p = p;
  s.theta = theta;
  s.p_star = harmonic_conjugate(p);
  const double ps = s.p_star;
  const double m = static_cast<double>(a.size());
  const double log_theta = std::log(theta);

  // log lambda = -p* log theta + sum (p*/p_j) log(p_j a_j)
  double log_lambda = -ps * log_theta;
  double log_bound = -ps * log_theta;
  double log_factor = -std::log(m) / ps;
  for (std::size_t j = 0; j < a.size(); ++j) {
    log_lambda += ps / p[j] * std::log(p[j] * a[j]);
    log_bound += ps / p[j] * (std::log(p[j] / ps) + std::log(a[j]));
    log_factor += std::log(p[j] / ps) / p[j];
  }
  s.lambda = std::exp(log_lambda);
  s.closed_form_bound = std::exp(log_bound);
  s.equal_share_predicted_factor = std::exp(log_factor);

  double log_prod = log_theta;
  double log_prod_eq = log_theta;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double log_y = (log_lambda - std::log(p[i] * a[i])) / p[i];
    const double log_y_eq = (log_bound - std::log(m) - std::log(a[i])) / p[i];
    s.y.push_back(std::exp(log_y));
    s.equal_share_y.push_back(std::exp(log_y_eq));
    s.objective += a[i] * std::pow(s.y.back(), p[i]);
    s.equal_share_objective += a[i] * std::pow(s.equal_share_y.back(), p[i]);
    log_prod += log_y;
    log_prod_eq += log_y_eq;
  }
  s.constraint_product = std::exp(log_prod);
  s.equal_share_constraint_product = std::exp(log_prod_eq);
  s.equal_share_feasible = s.equal_share_constraint_product >= 1.0 - kSplitRelTol;
  return s;
}

struct UnionBoundReport {
  double theta = 1.0;
  std::vector<double> y;
  std::vector<double> thresholds;  // 1 / y_i
  double constraint_product = 0.0;  // theta * prod y_i
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
  Method method = Method::analytic;

  friend bool operator==(const UnionBoundReport&, const UnionBoundReport&) = default;
};

namespace detail {

inline FunctionExpr product_of(const std::vector<FunctionExpr>& fs) {
  return fs.size() == 1 ? fs.front() : product(fs);
}

}  // namespace detail

// |{x in B : prod f_i > theta}| <= sum_i |{x in B : f_i > 1/y_i}|.
inline UnionBoundReport union_bound_check(const std::vector<FunctionExpr>& fs, const Ball& ball, double theta,
                                          const std::vector<double>& y, const SearchConfig& cfg = {}) {
  if (fs.empty() || fs.size() != y.size()) throw input_error("union bound: need one y_i per function");
  if (!(theta > 0.0)) throw input_error("union bound: theta must be positive");
  UnionBoundReport rep;
  rep.theta = theta;
  rep.y = y;
  double log_prod = std::log(theta);
  for (double yi : y) {
    if (!(yi > 0.0) || !std::isfinite(yi)) throw input_error("union bound: y_i must be positive and finite");
    rep.thresholds.push_back(1.0 / yi);
    log_prod += std::log(yi);
  }
  rep.constraint_product = std::exp(log_prod);
  if (rep.constraint_product < 1.0 - kSplitRelTol)
    throw constraint_violation("union bound: theta * prod y_i = " + std::to_string(rep.constraint_product) +
                               " < 1, so {prod f_i > theta} is not covered by the per-factor events");

  double mc_err = 0.0;
  auto measure = [&](const FunctionExpr& f, double gamma) {
    if (has_closed_form(f) && cfg.allow_analytic) return distribution(f, ball, gamma);
    if (!cfg.allow_mc) throw unsupported_function("no closed form and Monte Carlo is disabled");
    rep.method = Method::monte_carlo;
    const auto est = distribution_mc(DistributionQuery(f, ball, gamma), cfg.mc_samples, cfg.seed);
    mc_err += 4.0 * est.std_error;
    return est.estimate;
  };
  rep.lhs = measure(detail::product_of(fs), theta);
  for (std::size_t i = 0; i < fs.size(); ++i) rep.rhs += measure(fs[i], rep.thresholds[i]);
  rep.tolerance = mc_err + 1e-12 * std::max(rep.lhs, rep.rhs);
  rep.verdict = rep.lhs <= rep.rhs + rep.tolerance;
  return rep;
}

struct HolderReport {
  QuasinormReport lhs;        // ||prod f_i||_{wM^p_q}
  QuasinormReport lhs_pstar;  // ||prod f_i||_{wM^{p*}_q}
  std::vector<QuasinormReport> factor_norms;
  double p_star = 1.0;
  double c_new = 1.0;
  double c_mid = 1.0;
  double c_old = 1.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
  bool pstar_verdict = false;
  bool inclusion_holds = false;

  friend bool operator==(const HolderReport&, const HolderReport&) = default;
};

namespace detail {

inline double combined_tolerance(const QuasinormReport& lhs, const std::vector<QuasinormReport>& factors,
                                 double rhs) {
  double rel = 0.0;
  for (const auto& f : factors)
    if (f.value > 0.0) rel += f.error_bound / f.value;
  return lhs.error_bound + rhs * rel + kVerdictRelSlack * rhs;
}

}  // namespace detail

inline HolderReport check_holder(const std::vector<FunctionExpr>& fs, const ExponentSystem& sys,
                                 const SearchConfig& cfg = {}, bool with_pstar = true) {
  if (fs.size() != sys.m())
    throw input_error("holder: " + std::to_string(fs.size()) + " functions for " + std::to_string(sys.m()) +
                      " exponent pairs");
  for (const auto& f : fs)
    if (f.dimension() != fs.front().dimension()) throw dimension_error("holder: functions differ in dimension");

  HolderReport rep;
  rep.factor_norms = parallel_map<QuasinormReport>(fs.size(), [&](std::size_t i) {
    return weak_morrey_norm(fs[i], sys.factors()[i].p, sys.factors()[i].q, cfg);
  });
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (rep.factor_norms[i].unbounded) throw not_in_space(i + 1, rep.factor_norms[i].diagnostics);

  const auto consts = bound_comparison(sys.p_list());
  rep.p_star = consts.p_star;
  rep.c_new = consts.c_new;
  rep.c_mid = consts.c_mid;
  rep.c_old = consts.c_old;

  const FunctionExpr prod = detail::product_of(fs);
  rep.lhs = weak_morrey_norm(prod, sys.target().p, sys.target().q, cfg);
  double rhs = 1.0;
  for (const auto& f : rep.factor_norms) rhs *= f.value;
  rep.ratio = rep.lhs.value == 0.0 ? 0.0 : rep.lhs.value / rhs;
  const double bound = rep.c_new * rhs;
  rep.tolerance = detail::combined_tolerance(rep.lhs, rep.factor_norms, bound);
  rep.verdict = rep.lhs.value <= bound + rep.tolerance;

  if (with_pstar) {
    std::vector<Ball> hints;
    if (rep.lhs.witness_ball) hints.push_back(*rep.lhs.witness_ball);
    rep.lhs_pstar = weak_morrey_norm(prod, rep.p_star, sys.target().q, cfg, hints);
    const double tol_pstar = detail::combined_tolerance(rep.lhs_pstar, rep.factor_norms, bound);
    rep.pstar_verdict = rep.lhs_pstar.value <= bound + tol_pstar;
    const double slack = rep.lhs.error_bound + rep.lhs_pstar.error_bound +
                         kVerdictRelSlack * std::max(rep.lhs.value, rep.lhs_pstar.value);
    rep.inclusion_holds = rep.lhs_pstar.value == kInf || rep.lhs.value <= rep.lhs_pstar.value + slack;
  } else {
    rep.pstar_verdict = rep.verdict;
    rep.inclusion_holds = true;
  }
  return rep;
}

}  // namespace weakmorrey
