#pragma once

// Search for function tuples with a large Hölder ratio
//   ||prod f_i||_{wM^p_q} / prod ||f_i||_{wM^{p_i}_{q_i}}
// over a parametric family. The result is the largest ratio found and its
// gap to c_new; it says nothing about whether c_new can be attained.
//
// Restart k runs a compass search from its own seed (seed + k) with a fixed
// evaluation allowance, so a larger budget only appends evaluations and the
// best ratio never decreases.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "weakmorrey/bounds.hpp"
#include "weakmorrey/error.hpp"
#include "weakmorrey/functions.hpp"
#include "weakmorrey/holder.hpp"
#include "weakmorrey/parallel.hpp"
#include "weakmorrey/parse.hpp"
#include "weakmorrey/quasinorm.hpp"
#include "weakmorrey/search.hpp"

namespace weakmorrey {

enum class FamilyKind { co_centered_powers, truncated_powers, two_level_steps };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::co_centered_powers:
      return "co_centered_powers";
    case FamilyKind::truncated_powers:
      return "truncated_powers";
    case FamilyKind::two_level_steps:
      return "two_level_steps";
  }
  return "unknown";
}

inline FamilyKind family_from_string(const std::string& s) {
  if (s == "co_centered_powers") return FamilyKind::co_centered_powers;
  if (s == "truncated_powers") return FamilyKind::truncated_powers;
  if (s == "two_level_steps") return FamilyKind::two_level_steps;
  throw input_error("unknown family '" + s + "' (co_centered_powers, truncated_powers, two_level_steps)");
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

// Per-factor parameters, all factors centered at the origin:
//   co_centered_powers: log c                         -> c |x|^(-n/q_i)
//   truncated_powers:   log c, fraction, log R        -> c |x|^(-fraction n/q_i) on |x| < R
//   two_level_steps:    log v1, log v2, log r1, log w -> v1 on |x| < r1, v2 on r1 <= |x| < r1 (1 + e^w)
struct FamilyConfig {
  FamilyKind kind = FamilyKind::truncated_powers;
  std::size_t n = 1;
  Range log_amplitude{-1.0, 1.0};
  Range exponent_fraction{0.0, 1.0};
  Range log_radius{-2.0, 2.0};
  Range log_width{-2.0, 2.0};
  std::size_t evals_per_restart = 100;
  // The centered value is exact for nonincreasing profiles; re-checking it
  // numerically on every trial dominates the cost of a search.
  SearchConfig search = [] {
    SearchConfig c;
    c.center_guard = false;
    return c;
  }();

  friend bool operator==(const FamilyConfig&, const FamilyConfig&) = default;
};

inline std::size_t params_per_factor(FamilyKind k) {
  switch (k) {
    case FamilyKind::co_centered_powers:
      return 1;
    case FamilyKind::truncated_powers:
      return 3;
    case FamilyKind::two_level_steps:
      return 4;
  }
  return 0;
}

inline std::vector<std::string> parameter_names(const FamilyConfig& fam, std::size_t m) {
  std::vector<std::string> base;
  switch (fam.kind) {
    case FamilyKind::co_centered_powers:
      base = {"log_c"};
      break;
    case FamilyKind::truncated_powers:
      base = {"log_c", "fraction", "log_radius"};
      break;
    case FamilyKind::two_level_steps:
      base = {"log_v1", "log_v2", "log_r1", "log_width"};
      break;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& b : base) out.push_back(b + "_" + std::to_string(i + 1));
  return out;
}

inline void parameter_box(const FamilyConfig& fam, std::size_t m, std::vector<double>& lo, std::vector<double>& hi) {
  std::vector<Range> per;
  switch (fam.kind) {
    case FamilyKind::co_centered_powers:
      per = {fam.log_amplitude};
      break;
    case FamilyKind::truncated_powers:
      per = {fam.log_amplitude, fam.exponent_fraction, fam.log_radius};
      break;
    case FamilyKind::two_level_steps:
      per = {fam.log_amplitude, fam.log_amplitude, fam.log_radius, fam.log_width};
      break;
  }
  lo.clear();
  hi.clear();
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& r : per) {
      if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi))
        throw input_error("family parameter range must satisfy lo <= hi");
      lo.push_back(r.lo);
      hi.push_back(r.hi);
    }
  if (fam.kind == FamilyKind::truncated_powers && (fam.exponent_fraction.lo < 0.0 || fam.exponent_fraction.hi > 1.0))
    throw input_error("exponent_fraction must lie in [0, 1]");
}

inline std::vector<FunctionExpr> build_family(const FamilyConfig& fam, const ExponentSystem& sys,
                                              const std::vector<double>& x) {
  const std::size_t m = sys.m();
  const std::size_t k = params_per_factor(fam.kind);
  if (x.size() != m * k) throw input_error("family parameter vector has the wrong length");
  const Point origin(fam.n, 0.0);
  const double dn = static_cast<double>(fam.n);
  std::vector<FunctionExpr> out;
  for (std::size_t i = 0; i < m; ++i) {
    const double* v = x.data() + i * k;
    const double qi = sys.factors()[i].q;
    switch (fam.kind) {
      case FamilyKind::co_centered_powers:
        out.push_back(power(std::exp(v[0]), dn / qi, origin));
        break;
      case FamilyKind::truncated_powers: {
        const double beta = std::clamp(v[1], 0.0, 1.0) * dn / qi;
        out.push_back(product({power(std::exp(v[0]), beta, origin), indicator(1.0, Ball(origin, std::exp(v[2])))}));
        break;
      }
      case FamilyKind::two_level_steps: {
        const double r1 = std::exp(v[2]);
        out.push_back(step(origin, {r1, r1 * (1.0 + std::exp(v[3]))}, {std::exp(v[0]), std::exp(v[1])}));
        break;
      }
    }
  }
  return out;
}

struct SharpnessTrial {
  std::size_t trial = 0;
  std::size_t restart = 0;
  std::vector<double> params;
  double ratio = 0.0;  // NaN when a norm was zero or infinite

  friend bool operator==(const SharpnessTrial& a, const SharpnessTrial& b) {
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.trial == b.trial && a.restart == b.restart && a.params == b.params && same(a.ratio, b.ratio);
  }
};

struct SharpnessResult {
  double best_ratio = 0.0;
  std::vector<double> best_params;
  std::vector<std::string> best_functions;
  std::size_t trials = 0;
  double c_new = 1.0;
  double gap = 0.0;
  std::vector<SharpnessTrial> history;

  friend bool operator==(const SharpnessResult&, const SharpnessResult&) = default;
};

namespace detail {

struct RatioEval {
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
};

inline RatioEval family_ratio(const FamilyConfig& fam, const ExponentSystem& sys, const std::vector<double>& x) {
  const auto fs = build_family(fam, sys, x);
  std::vector<QuasinormReport> norms;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto r = weak_morrey_norm(fs[i], sys.factors()[i].p, sys.factors()[i].q, fam.search);
    if (r.unbounded || !(r.value > 0.0)) return {};
    norms.push_back(std::move(r));
  }
  const auto lhs = weak_morrey_norm(product_of(fs), sys.target().p, sys.target().q, fam.search);
  if (lhs.unbounded) return {};
  double rhs = 1.0;
  for (const auto& r : norms) rhs *= r.value;
  RatioEval out;
  out.ratio = lhs.value / rhs;
  const double c_new = bound_new(sys.p_list());
  out.tolerance = combined_tolerance(lhs, norms, c_new * rhs) / rhs;
  return out;
}

struct RestartOutcome {
  std::vector<SharpnessTrial> history;
  double best = -kInf;
  std::vector<double> best_params;
};

}  // namespace detail

inline SharpnessResult search_extremal(const ExponentSystem& sys, const FamilyConfig& fam, std::size_t budget,
                                       std::uint64_t seed) {
  if (budget < 1) throw input_error("sharpness budget must be at least 1");
  if (fam.evals_per_restart < 1) throw input_error("evals_per_restart must be at least 1");
  check_dimension(fam.n);
  const std::size_t m = sys.m();
  std::vector<double> lo, hi;
  parameter_box(fam, m, lo, hi);
  const double c_new = bound_new(sys.p_list());

  const std::size_t per = fam.evals_per_restart;
  const std::size_t restarts = (budget + per - 1) / per;
  auto outcomes = parallel_map<detail::RestartOutcome>(restarts, [&](std::size_t k) {
    detail::RestartOutcome out;
    const std::size_t allowance = std::min(per, budget - k * per);
    std::vector<double> x0(lo.size());
    std::mt19937_64 rng(seed + k);
    for (std::size_t i = 0; i < x0.size(); ++i) {
      // Restart 0 starts at the box center; the others at seeded random points.
      x0[i] = k == 0 ? 0.5 * (lo[i] + hi[i]) : std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
      if (lo[i] == hi[i]) x0[i] = lo[i];
    }
    std::vector<double> step(lo.size());
    for (std::size_t i = 0; i < step.size(); ++i) step[i] = 0.25 * (hi[i] - lo[i]);
    search::pattern_search_max(
        [&](const std::vector<double>& x) {
          const auto ev = detail::family_ratio(fam, sys, x);
          out.history.push_back({0, k, x, ev.ratio});
          if (std::isnan(ev.ratio)) return -kInf;
          if (ev.ratio > c_new + ev.tolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "ratio " << ev.ratio << " exceeds c_new = " << c_new << " at restart " << k
                << "; this contradicts the proven bound and indicates a numerical defect";
            throw inconsistency_error(msg.str());
          }
          if (ev.ratio > out.best) {
            out.best = ev.ratio;
            out.best_params = x;
          }
          return ev.ratio;
        },
        x0, step, lo, hi, {allowance, 0.5, 1e-9});
    return out;
  });

  SharpnessResult res;
  res.c_new = c_new;
  double best = -kInf;
  for (const auto& o : outcomes) {
    // Strict comparison keeps the lowest restart index on ties.
    if (o.best > best) {
      best = o.best;
      res.best_params = o.best_params;
    }
    for (const auto& t : o.history) {
      res.history.push_back(t);
      res.history.back().trial = res.history.size();
    }
  }
  res.trials = res.history.size();
  if (best == -kInf) throw degenerate_family("every candidate in the family had a zero or infinite norm");
  res.best_ratio = best;
  res.gap = c_new - best;
  for (const auto& f : build_family(fam, sys, res.best_params)) res.best_functions.push_back(to_spec(f));
  return res;
}

}  // namespace weakmorrey
