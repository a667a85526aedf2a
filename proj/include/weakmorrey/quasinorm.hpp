#pragma once

// Weak Lebesgue and weak Morrey quasinorms.
//
//   ||f||_{L^{p,inf}(B)} = sup_{gamma > 0} gamma * |{x in B : f(x) > gamma}|^(1/p)
//   ||f||_{wM^p_q}       = sup_B |B|^(1/q - 1/p) * ||f||_{L^{p,inf}(B)}
//
// The measure carries the exponent 1/p in both definitions.
//
// Paths, in order of preference:
//  * analytic: radial profiles on balls sharing their center, and step
//    profiles on any ball. On such balls d(gamma) = A + C * gamma^(-n/alpha)
//    between breakpoints, so the sup sits at a breakpoint, a closed-form
//    stationary point, or an asymptotic plateau.
//  * grid-refined: exact distribution, numeric sup (log grid + golden
//    section over gamma; multi-start grid + pattern search over balls).
//  * monte-carlo: empirical distribution from uniform samples in the ball.
//
// For radially nonincreasing profiles the sup over balls is attained by
// balls centered at the profile center with |B| = |{f > gamma}|, which gives
// ||f||_{wM^p_q} = sup_gamma gamma * |{f > gamma}|^(1/q) exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "weakmorrey/bounds.hpp"
#include "weakmorrey/error.hpp"
#include "weakmorrey/functions.hpp"
#include "weakmorrey/geometry.hpp"
#include "weakmorrey/search.hpp"

namespace weakmorrey {

enum class Method { analytic, grid_refined, monte_carlo };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::analytic:
      return "analytic";
    case Method::grid_refined:
      return "grid-refined";
    case Method::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

inline Method method_from_string(const std::string& s) {
  if (s == "analytic") return Method::analytic;
  if (s == "grid-refined") return Method::grid_refined;
  if (s == "monte-carlo") return Method::monte_carlo;
  throw input_error("unknown method '" + s + "'");
}

struct SearchConfig {
  double radius_min = 1e-6;
  double radius_max = 1e6;
  std::size_t radius_grid = 128;
  std::size_t refine_rounds = 3;
  std::size_t center_grid = 12;     // absolute center offsets per radius
  std::size_t starts = 4;           // grid maxima refined independently
  std::size_t polish_evaluations = 120;
  std::size_t gamma_grid = 96;
  double rel_tol = 1e-6;
  std::size_t mc_samples = 200000;
  std::size_t mc_search_samples = 4000;
  std::size_t mc_random_centers = 8;
  std::uint64_t seed = 1;
  bool allow_analytic = true;
  bool allow_mc = true;
  // Numeric off-center search for radial nonincreasing functions, whose
  // centered value is already exact.
  bool center_guard = true;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

struct QuasinormReport {
  double value = 0.0;
  double witness_gamma = 0.0;
  std::optional<Ball> witness_ball;
  Method method = Method::analytic;
  double error_bound = 0.0;
  bool unbounded = false;
  std::string diagnostics;

  friend bool operator==(const QuasinormReport&, const QuasinormReport&) = default;
};

namespace detail {

inline constexpr double kTieRelTol = 1e-12;
inline constexpr double kExponentRelTol = 1e-12;

struct SupResult {
  double value = 0.0;
  double gamma = 0.0;
  double error = 0.0;
  bool unbounded = false;
  bool plateau = false;
};

struct Candidate {
  double gamma;
  double value;
  double error = 0.0;
  bool plateau = false;
};

// Largest value; among near-ties the smallest gamma (left edge of a plateau).
inline SupResult pick(const std::vector<Candidate>& cands) {
  SupResult out;
  if (cands.empty()) return out;
  double best = 0.0;
  for (const auto& c : cands) best = std::max(best, c.value);
  if (best == 0.0) return out;
  const Candidate* chosen = nullptr;
  for (const auto& c : cands) {
    if (c.value >= best * (1.0 - kTieRelTol) && (!chosen || c.gamma < chosen->gamma)) chosen = &c;
  }
  out.value = best;
  out.gamma = chosen->gamma;
  out.error = chosen->error + (best - chosen->value);
  out.plateau = chosen->plateau;
  return out;
}

inline SupResult unbounded_sup(double gamma) { return {kInf, gamma, 0.0, true, false}; }

inline bool same_exponent(double a, double b) { return std::abs(a - b) <= kExponentRelTol * std::max(a, b); }

// |{s < R : g(s) > gamma}| (or >= when strict is false) for a profile and a
// ball of radius R (possibly +inf) centered at the profile center.
inline double radial_distribution(const RadialProfile& prof, double R, double gamma, bool strict = true) {
  const std::size_t n = prof.dimension();
  const double vn = unit_ball_volume(n);
  const double dn = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t j = 0; j < prof.pieces(); ++j) {
    const double k = prof.coeff[j];
    const double lo = prof.inner(j);
    if (k == 0.0 || lo >= R) continue;
    double top = std::min(prof.outer[j], R);
    if (prof.alpha == 0.0) {
      if (strict ? !(k > gamma) : !(k >= gamma)) continue;
    } else {
      top = std::min(top, std::pow(k / gamma, 1.0 / prof.alpha));
      if (!(top > lo)) continue;
    }
    if (top == kInf) return kInf;
    total += vn * (std::pow(top, dn) - std::pow(lo, dn));
  }
  return total;
}

// sup_gamma gamma * d(gamma)^(1/p) where every positive level of a step
// profile is a candidate, approached from below.
inline SupResult step_levels_sup(const RadialProfile& prof, const Ball* ball, double R, double p) {
  std::vector<double> levels;
  double s_lo = 0.0, s_hi = R;
  if (ball) {
    const double d = distance(ball->center(), prof.center);
    s_lo = std::max(0.0, d - ball->radius());
    s_hi = d + ball->radius();
  }
  for (std::size_t j = 0; j < prof.pieces(); ++j)
    if (prof.coeff[j] > 0.0 && prof.inner(j) < s_hi && prof.outer[j] > s_lo) levels.push_back(prof.coeff[j]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<Candidate> cands;
  for (double v : levels) {
    const double d = ball ? profile_distribution(prof, *ball, v, false) : radial_distribution(prof, R, v, false);
    if (d == kInf) return unbounded_sup(v);
    cands.push_back({v, v * std::pow(d, 1.0 / p)});
  }
  return pick(cands);
}

// Exact sup over gamma on the centered ball of radius R (R may be +inf).
inline SupResult centered_weak_sup(const RadialProfile& prof, double R, double p) {
  if (prof.alpha == 0.0) return step_levels_sup(prof, nullptr, R, p);
  const std::size_t n = prof.dimension();
  const double dn = static_cast<double>(n);
  const double vn = unit_ball_volume(n);
  const double alpha = prof.alpha;
  const double e = p - dn / alpha;  // phi^p = A gamma^p + C gamma^e between breakpoints
  auto phi = [&](double g) { return g * std::pow(radial_distribution(prof, R, g), 1.0 / p); };

  std::vector<double> bps;
  for (std::size_t j = 0; j < prof.pieces(); ++j) {
    const double k = prof.coeff[j];
    const double lo = prof.inner(j);
    if (k == 0.0 || lo >= R) continue;
    if (lo > 0.0) bps.push_back(k * std::pow(lo, -alpha));
    const double top = std::min(prof.outer[j], R);
    if (top < kInf) bps.push_back(k * std::pow(top, -alpha));
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  std::vector<Candidate> cands;
  for (double g : bps) cands.push_back({g, phi(g)});

  // Coefficients of phi^p at a representative gamma of an open interval.
  auto coefficients = [&](double g, double& A, double& C) {
    A = 0.0;
    C = 0.0;
    for (std::size_t j = 0; j < prof.pieces(); ++j) {
      const double k = prof.coeff[j];
      const double lo = prof.inner(j);
      if (k == 0.0 || lo >= R) continue;
      const double top = std::min(prof.outer[j], R);
      const double rho = std::pow(k / g, 1.0 / alpha);
      if (rho >= top) {
        A += vn * (std::pow(top, dn) - std::pow(lo, dn));
      } else if (rho > lo) {
        A -= vn * std::pow(lo, dn);
        C += vn * std::pow(k, dn / alpha);
      }
    }
  };
  auto stationary = [&](double a, double b, double probe) {
    double A, C;
    coefficients(probe, A, C);
    if (A == 0.0 || C == 0.0 || e == 0.0) return;
    const double base = -e * C / (p * A);
    if (!(base > 0.0)) return;
    const double g = std::pow(base, alpha / dn);
    if (g > a && g < b) cands.push_back({g, phi(g)});
  };
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) stationary(bps[i], bps[i + 1], std::sqrt(bps[i] * bps[i + 1]));

  const bool singular = prof.coeff.front() > 0.0;
  const bool tail = R == kInf && prof.has_tail();
  const double upper_exp = 1.0 - dn / (alpha * p);

  // gamma -> inf: only the singular piece is active, phi ~ gamma^(1 - n/(alpha p)).
  if (singular) {
    if (upper_exp > 0.0 && !same_exponent(alpha * p, dn)) return unbounded_sup(bps.empty() ? prof.coeff.front() : bps.back());
    if (same_exponent(alpha * p, dn)) {
      const double g = bps.empty() ? prof.coeff.front() : bps.back();
      cands.push_back({g, prof.coeff.front() * std::pow(vn, 1.0 / p), 0.0, true});
    } else if (!bps.empty()) {
      stationary(bps.back(), kInf, 2.0 * bps.back());
    }
  }
  // gamma -> 0: the unbounded tail piece is active, phi^p = A gamma^p + C gamma^e.
  if (tail) {
    const double probe = bps.empty() ? prof.coeff.back() : 0.5 * bps.front();
    double A, C;
    coefficients(probe, A, C);
    if (e < 0.0 && !same_exponent(alpha * p, dn)) return unbounded_sup(probe);
    if (same_exponent(alpha * p, dn)) {
      const double limit = std::pow(C, 1.0 / p);
      if (A >= 0.0) {
        if (bps.empty()) cands.push_back({prof.coeff.back(), limit, 0.0, true});
      } else {
        double g = std::pow(1e-12 * C / -A, 1.0 / p);
        if (!bps.empty()) g = std::min(g, bps.front());
        const double at = phi(g);
        cands.push_back({g, limit, std::max(0.0, limit - at), false});
      }
    } else if (!bps.empty()) {
      stationary(0.0, bps.front(), probe);
    }
  } else if (!bps.empty()) {
    stationary(0.0, bps.front(), 0.5 * bps.front());
  }
  return pick(cands);
}

// Sup over gamma on an off-center ball for a profile with alpha > 0. The
// distribution is exact; the sup is located on a log grid and refined by
// golden section.
inline SupResult numeric_weak_sup(const RadialProfile& prof, const Ball& ball, double p, const SearchConfig& cfg) {
  const std::size_t n = prof.dimension();
  const double dn = static_cast<double>(n);
  const double vn = unit_ball_volume(n);
  const double alpha = prof.alpha;
  const double dist = distance(ball.center(), prof.center);
  const double r = ball.radius();
  const double s_lo = std::max(0.0, dist - r);
  const double s_hi = dist + r;
  auto phi = [&](double g) { return g * std::pow(profile_distribution(prof, ball, g), 1.0 / p); };

  std::vector<double> bps;
  for (std::size_t j = 0; j < prof.pieces(); ++j) {
    const double k = prof.coeff[j];
    const double lo = std::max(prof.inner(j), s_lo);
    const double hi = std::min(prof.outer[j], s_hi);
    if (k == 0.0 || !(hi > lo)) continue;
    if (lo > 0.0) bps.push_back(k * std::pow(lo, -alpha));
    bps.push_back(k * std::pow(hi, -alpha));
  }
  if (bps.empty()) return {};

  std::vector<Candidate> cands;
  const bool singular = prof.coeff.front() > 0.0 && dist <= r;
  double g_hi = *std::max_element(bps.begin(), bps.end());
  const double g_lo = *std::min_element(bps.begin(), bps.end());
  if (singular) {
    const double k0 = prof.coeff.front();
    const bool interior = dist < r;
    const double share = interior ? 1.0 : 0.5;
    if (!same_exponent(alpha * p, dn) && alpha * p > dn) return unbounded_sup(g_hi);
    const double rho = interior ? std::min(r - dist, prof.outer.front()) : 1e-6 * std::min(r, prof.outer.front());
    const double g_w = k0 * std::pow(rho, -alpha);
    g_hi = std::max(g_hi, g_w);
    if (same_exponent(alpha * p, dn)) {
      const double limit = k0 * std::pow(share * vn, 1.0 / p);
      cands.push_back({g_w, limit, interior ? 0.0 : std::abs(limit - phi(g_w)), interior});
    }
  }

  std::vector<double> grid = search::log_grid(g_lo, g_hi, std::max<std::size_t>(cfg.gamma_grid, 3));
  grid.insert(grid.end(), bps.begin(), bps.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> vals(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = phi(grid[i]);
    cands.push_back({grid[i], vals[i]});
    if (vals[i] > vals[best]) best = i;
  }
  if (vals[best] > 0.0) {
    const double a = std::log(grid[best == 0 ? 0 : best - 1]);
    const double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
    if (b > a) {
      auto refined = search::golden_section_max([&](double t) { return phi(std::exp(t)); }, a, b, 100, 1e-13);
      cands.push_back({std::exp(refined.x), refined.value});
    }
  }
  SupResult out = pick(cands);
  out.error += cfg.rel_tol * out.value;
  return out;
}

// Weak norm from uniform samples: with values sorted descending, the
// superlevel {f >= v_(k)} has estimated measure |B| k / N.
inline SupResult mc_weak_sup(const FunctionExpr& f, const Ball& ball, double p, std::size_t samples,
                             std::uint64_t seed) {
  if (samples < kMinMcSamples)
    throw input_error("Monte Carlo needs at least " + std::to_string(kMinMcSamples) + " samples");
  std::mt19937_64 rng(seed);
  std::vector<double> vals(samples);
  Point x;
  for (auto& v : vals) {
    sample_in_ball(ball, rng, x);
    v = evaluate(f, x);
  }
  std::sort(vals.begin(), vals.end(), std::greater<>());
  const double vol = ball_measure(ball);
  const double N = static_cast<double>(samples);
  const std::size_t k_min = std::max<std::size_t>(100, samples / 1000);
  SupResult out;
  std::size_t witness_k = 0;
  for (std::size_t k = k_min; k <= samples; ++k) {
    const double v = vals[k - 1];
    if (!(v > 0.0) || v == kInf) continue;
    // Ties: {f >= v} holds every sample equal to v.
    if (k < samples && vals[k] == v) continue;
    const double val = v * std::pow(vol * static_cast<double>(k) / N, 1.0 / p);
    if (val > out.value) {
      out.value = val;
      out.gamma = v;
      witness_k = k;
    }
  }
  if (witness_k > 0) {
    const double frac = static_cast<double>(witness_k) / N;
    out.error = 4.0 * out.value / p * std::sqrt((1.0 - frac) / static_cast<double>(witness_k));
  }
  return out;
}

inline SupResult profile_ball_sup(const RadialProfile& prof, const Ball& ball, double p, const SearchConfig& cfg) {
  if (prof.is_zero()) return {};
  const double dist = distance(ball.center(), prof.center);
  if (dist == 0.0) return centered_weak_sup(prof, ball.radius(), p);
  if (prof.alpha == 0.0) return step_levels_sup(prof, &ball, ball.radius(), p);
  return numeric_weak_sup(prof, ball, p, cfg);
}

inline double morrey_factor(const Ball& ball, double p, double q) {
  return std::pow(ball_measure(ball), 1.0 / q - 1.0 / p);
}

inline void check_exponents(double p, double q) {
  validate(ExponentPair{p, q}, "quasinorm exponents");
}

}  // namespace detail

inline QuasinormReport weak_lebesgue_norm(const FunctionExpr& f, const Ball& ball, double p,
                                          const SearchConfig& cfg = {}) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw invalid_exponent("weak Lebesgue exponent must be in [1, inf)");
  if (f.dimension() != ball.dimension()) throw dimension_error("function and ball dimensions differ");
  QuasinormReport rep;
  rep.witness_ball = ball;
  auto prof = radial_profile(f);
  detail::SupResult sup;
  if (prof && cfg.allow_analytic) {
    const bool exact = prof->alpha == 0.0 || distance(ball.center(), prof->center) == 0.0;
    sup = detail::profile_ball_sup(*prof, ball, p, cfg);
    rep.method = exact ? Method::analytic : Method::grid_refined;
    if (sup.plateau) rep.diagnostics = "plateau: objective constant for gamma >= witness";
  } else if (cfg.allow_mc) {
    sup = detail::mc_weak_sup(f, ball, p, cfg.mc_samples, cfg.seed);
    rep.method = Method::monte_carlo;
  } else {
    throw unsupported_function("no analytic path for this function and Monte Carlo is disabled");
  }
  rep.value = sup.value;
  rep.witness_gamma = sup.gamma;
  rep.error_bound = sup.unbounded ? 0.0 : sup.error;
  rep.unbounded = sup.unbounded;
  if (sup.unbounded) rep.diagnostics = "unbounded: objective grows without bound as gamma -> inf";
  return rep;
}

// |B|^(1/q - 1/p) * gamma * |{x in B : f(x) >= gamma}|^(1/p), the objective
// whose sup is the weak Morrey quasinorm, evaluated at the left limit in
// gamma so that step levels attain their sup. Requires a closed form.
inline double morrey_objective(const FunctionExpr& f, const Ball& ball, double gamma, double p, double q) {
  auto prof = radial_profile(f);
  if (!prof) throw no_closed_form("morrey_objective needs a closed-form distribution");
  if (f.dimension() != ball.dimension()) throw dimension_error("function and ball dimensions differ");
  const double d = profile_distribution(*prof, ball, gamma, false);
  return detail::morrey_factor(ball, p, q) * gamma * std::pow(d, 1.0 / p);
}

namespace detail {

struct BallSearchResult {
  double value = 0.0;
  double gamma = 0.0;
  double error = 0.0;
  std::optional<Ball> ball;
  bool unbounded = false;
};

// Sup over balls B(center + t e_1, r) for a radial profile; by symmetry the
// offset direction is irrelevant, so the search runs over (log r, t).
inline BallSearchResult radial_ball_search(const RadialProfile& prof, double p, double q, const SearchConfig& cfg,
                                           const std::vector<Ball>& hints) {
  const double t_max = std::max(prof.largest_break(), 1.0);
  const double u_lo = std::log(cfg.radius_min);
  const double u_hi = std::log(cfg.radius_max);

  auto make_ball = [&](double t, double r) {
    Point c = prof.center;
    c[0] += t;
    return Ball(std::move(c), r);
  };
  struct Eval {
    double value = -1.0;
    double gamma = 0.0;
    double error = 0.0;
  };
  auto objective = [&](double t, double u) {
    const double r = std::exp(u);
    const Ball b = make_ball(t, r);
    const SupResult s = profile_ball_sup(prof, b, p, cfg);
    const double factor = morrey_factor(b, p, q);
    return Eval{s.value * factor, s.gamma, s.error * factor};
  };

  struct Point2 {
    double t, u;
    Eval e;
  };
  std::vector<Point2> pool;
  const auto radii = search::log_grid(cfg.radius_min, cfg.radius_max, std::max<std::size_t>(cfg.radius_grid, 2));
  const double du = (u_hi - u_lo) / static_cast<double>(std::max<std::size_t>(cfg.radius_grid, 2) - 1);
  const std::size_t nt = std::max<std::size_t>(cfg.center_grid, 2);
  const double dt = t_max / static_cast<double>(nt - 1);
  for (double r : radii) {
    const double u = std::log(r);
    std::vector<double> offsets;
    for (std::size_t i = 0; i < nt; ++i) offsets.push_back(dt * static_cast<double>(i));
    for (double w : {0.5, 1.0}) offsets.push_back(std::min(w * r, t_max));
    for (std::size_t j = 0; j + 1 < prof.pieces(); ++j) offsets.push_back(std::min(prof.outer[j], t_max));
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    for (double t : offsets) pool.push_back({t, u, objective(t, u)});
  }
  for (const auto& h : hints) {
    const double t = std::min(distance(h.center(), prof.center), t_max);
    const double u = std::clamp(std::log(h.radius()), u_lo, u_hi);
    pool.push_back({t, u, objective(t, u)});
  }

  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pool[a].e.value > pool[b].e.value; });

  Point2 best = pool[order.front()];
  std::vector<Point2> starts;
  for (std::size_t idx : order) {
    if (starts.size() >= std::max<std::size_t>(cfg.starts, 1)) break;
    const auto& c = pool[idx];
    bool distinct = true;
    for (const auto& s : starts)
      if (std::abs(s.u - c.u) < 1.5 * du && std::abs(s.t - c.t) < 1.5 * std::max(dt, 1e-300)) distinct = false;
    if (distinct) starts.push_back(c);
  }

  for (auto start : starts) {
    double span_t = dt;
    double span_u = du;
    for (std::size_t round = 0; round < cfg.refine_rounds; ++round) {
      Point2 local = start;
      for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
          const double t = std::clamp(start.t + 0.5 * span_t * i, 0.0, t_max);
          const double u = std::clamp(start.u + 0.5 * span_u * j, u_lo, u_hi);
          const Eval e = objective(t, u);
          if (e.value > local.e.value) local = {t, u, e};
        }
      }
      start = local;
      span_t /= 3.0;
      span_u /= 3.0;
    }
    Eval last = start.e;
    auto polished = search::pattern_search_max(
        [&](const std::vector<double>& x) {
          const Eval e = objective(x[0], x[1]);
          if (e.value > last.value) last = e;
          return e.value;
        },
        {start.t, start.u}, {span_t, span_u}, {0.0, u_lo}, {t_max, u_hi},
        {cfg.polish_evaluations, 0.5, 1e-12});
    if (polished.value > start.e.value) start = {polished.x[0], polished.x[1], objective(polished.x[0], polished.x[1])};
    if (start.e.value > best.e.value) best = start;
  }

  BallSearchResult out;
  out.value = std::max(best.e.value, 0.0);
  out.gamma = best.e.gamma;
  out.error = best.e.error + cfg.rel_tol * out.value;
  out.ball = make_ball(best.t, std::exp(best.u));
  return out;
}

inline void collect_centers(const FunctionExpr& f, std::vector<Point>& centers, double& pad) {
  struct Visitor {
    std::vector<Point>& centers;
    double& pad;
    void operator()(const RadialPower& p) const { centers.push_back(p.center); }
    void operator()(const BallIndicator& b) const {
      centers.push_back(b.support.center());
      pad = std::max(pad, b.support.radius());
    }
    void operator()(const RadialStep& s) const {
      centers.push_back(s.center);
      pad = std::max(pad, s.breaks.back());
    }
    void operator()(const Product& p) const {
      for (const auto& g : p.factors) collect_centers(g, centers, pad);
    }
  };
  std::visit(Visitor{centers, pad}, f.node());
}

// Balls where a factor jumps: indicator supports and step break spheres.
inline void collect_feature_balls(const FunctionExpr& f, std::vector<Ball>& out) {
  struct Visitor {
    std::vector<Ball>& out;
    void operator()(const RadialPower&) const {}
    void operator()(const BallIndicator& b) const { out.push_back(b.support); }
    void operator()(const RadialStep& s) const {
      for (double r : s.breaks)
        if (r > 0.0 && r < kInf) out.emplace_back(s.center, r);
    }
    void operator()(const Product& p) const {
      for (const auto& g : p.factors) collect_feature_balls(g, out);
    }
  };
  std::visit(Visitor{out}, f.node());
}

// A ball enclosing the intersection of two overlapping balls: centered on
// the axial extent of the lens, wide enough for its equator.
inline std::optional<Ball> lens_cover(const Ball& a, const Ball& b) {
  const double d = distance(a.center(), b.center());
  const double r = a.radius(), s = b.radius();
  if (d - std::max(r, s) >= std::min(r, s)) return std::nullopt;
  if (std::max(r, s) - d >= std::min(r, s)) return r <= s ? a : b;
  const double x = (d * d + r * r - s * s) / (2.0 * d);
  const double lo = std::max(-r, d - s), hi = std::min(r, d + s);
  const double mid = 0.5 * (lo + hi);
  const double equator = std::sqrt(std::max(0.0, r * r - x * x));
  const double rad = a.dimension() == 1 ? 0.5 * (hi - lo) : std::max(0.5 * (hi - lo), std::hypot(equator, x - mid));
  Point c = a.center();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += mid / d * (b.center()[i] - a.center()[i]);
  return Ball(std::move(c), rad);
}

// Sup over balls for functions without a closed form, on Monte Carlo weak
// norms with common random numbers.
inline BallSearchResult mc_ball_search(const FunctionExpr& f, double p, double q, const SearchConfig& cfg,
                                       const std::vector<Ball>& hints) {
  const std::size_t n = f.dimension();
  std::vector<Point> centers;
  double pad = 1.0;
  collect_centers(f, centers, pad);
  Point lo(n, kInf), hi(n, -kInf);
  for (const auto& c : centers)
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], c[i] - pad);
      hi[i] = std::max(hi[i], c[i] + pad);
    }
  Point mid(n);
  for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
  centers.push_back(mid);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t k = 0; k < cfg.mc_random_centers; ++k) {
    Point c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    centers.push_back(std::move(c));
  }
  const double u_lo = std::log(cfg.radius_min);
  const double u_hi = std::log(cfg.radius_max);
  auto objective = [&](const std::vector<double>& x, std::size_t samples) {
    Point c(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    const Ball b(std::move(c), std::exp(x[n]));
    SupResult s = mc_weak_sup(f, b, p, samples, cfg.seed);
    const double factor = morrey_factor(b, p, q);
    s.value *= factor;
    s.error *= factor;
    return s;
  };

  const std::size_t nr = std::max<std::size_t>(cfg.radius_grid / 4, 8);
  const auto radii = search::log_grid(cfg.radius_min, cfg.radius_max, nr);
  struct Entry {
    std::vector<double> x;
    double value;
    std::size_t radius_index;
  };
  std::vector<Entry> pool;
  for (const auto& c : centers) {
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      std::vector<double> x(c.begin(), c.end());
      x.push_back(std::log(radii[ri]));
      pool.push_back({x, objective(x, cfg.mc_search_samples).value, ri});
    }
  }
  std::vector<Ball> extra = hints;
  std::vector<Ball> features;
  collect_feature_balls(f, features);
  for (std::size_t i = 0; i < features.size(); ++i) {
    extra.push_back(features[i]);
    for (std::size_t j = i + 1; j < features.size(); ++j)
      if (auto cover = lens_cover(features[i], features[j])) extra.push_back(*cover);
  }
  for (const auto& h : extra) {
    std::vector<double> x(h.center().begin(), h.center().end());
    x.push_back(std::clamp(std::log(h.radius()), u_lo, u_hi));
    pool.push_back({x, objective(x, cfg.mc_search_samples).value, nr});
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });

  BallSearchResult out;
  // Growth at the edge of the radius range means the sup is not attained inside it.
  const Entry& top = pool.front();
  if (top.radius_index == 0 || top.radius_index + 1 == nr) {
    std::vector<double> inner = top.x;
    inner[n] = std::log(radii[top.radius_index == 0 ? 1 : nr - 2]);
    const double neighbour = objective(inner, cfg.mc_search_samples).value;
    if (top.value > 1.01 * neighbour) {
      out.unbounded = true;
      out.value = kInf;
      return out;
    }
  }

  std::vector<double> lo_box(lo.begin(), lo.end()), hi_box(hi.begin(), hi.end());
  lo_box.push_back(u_lo);
  hi_box.push_back(u_hi);
  std::vector<double> step(n, 0.25 * pad);
  step.push_back((u_hi - u_lo) / static_cast<double>(nr - 1));
  std::vector<double> best_x = top.x;
  double best_v = top.value;
  const std::size_t k = std::min<std::size_t>(std::max<std::size_t>(cfg.starts, 1), pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    auto res = search::pattern_search_max(
        [&](const std::vector<double>& x) { return objective(x, cfg.mc_search_samples).value; }, pool[i].x, step,
        lo_box, hi_box, {std::max<std::size_t>(cfg.polish_evaluations / k, 1), 0.5, 1e-6});
    if (res.value > best_v) {
      best_v = res.value;
      best_x = res.x;
    }
  }
  const SupResult final_eval = objective(best_x, cfg.mc_samples);
  out.value = final_eval.value;
  out.gamma = final_eval.gamma;
  out.error = final_eval.error;
  out.ball = Ball(Point(best_x.begin(), best_x.begin() + static_cast<std::ptrdiff_t>(n)), std::exp(best_x[n]));
  return out;
}

}  // namespace detail

// Weak Morrey quasinorm. `hints` are extra balls evaluated by the numeric
// searches (a witness from a related computation, for example).
inline QuasinormReport weak_morrey_norm(const FunctionExpr& f, double p, double q, const SearchConfig& cfg = {},
                                        const std::vector<Ball>& hints = {}) {
  detail::check_exponents(p, q);
  for (const auto& h : hints)
    if (h.dimension() != f.dimension()) throw dimension_error("hint ball dimension differs from function");
  const std::size_t n = f.dimension();
  const double dn = static_cast<double>(n);
  QuasinormReport rep;
  auto prof = radial_profile(f);

  if (prof && cfg.allow_analytic) {
    if (prof->is_zero()) {
      rep.diagnostics = "zero function";
      return rep;
    }
    const double crit = dn / q;
    if (prof->is_singular() && prof->alpha > crit && !detail::same_exponent(prof->alpha, crit)) {
      rep.value = kInf;
      rep.unbounded = true;
      rep.diagnostics = "unbounded: singularity |x - x0|^(-alpha) with alpha > n/q (small balls)";
      return rep;
    }
    if (prof->has_tail() && prof->alpha < crit && !detail::same_exponent(prof->alpha, crit)) {
      rep.value = kInf;
      rep.unbounded = true;
      rep.diagnostics = "unbounded: tail decays slower than |x|^(-n/q) (large balls)";
      return rep;
    }
    if (prof->is_nonincreasing()) {
      const detail::SupResult sup = detail::centered_weak_sup(*prof, kInf, q);
      const double D = detail::radial_distribution(*prof, kInf, sup.gamma, false);
      const double rho = std::pow(D / unit_ball_volume(n), 1.0 / dn);
      rep.value = sup.value;
      rep.witness_gamma = sup.gamma;
      rep.error_bound = sup.error;
      if (rho > 0.0 && std::isfinite(rho)) rep.witness_ball = Ball(prof->center, rho);
      rep.method = Method::analytic;
      if (sup.plateau) rep.diagnostics = "plateau: every ball centered at the profile center attains the value";
      if (cfg.center_guard) {
        std::vector<Ball> all_hints = hints;
        if (rep.witness_ball) all_hints.push_back(*rep.witness_ball);
        const auto guard = detail::radial_ball_search(*prof, p, q, cfg, all_hints);
        if (guard.value > rep.value * (1.0 + 1e-9) + guard.error + rep.error_bound) {
          rep.value = guard.value;
          rep.witness_gamma = guard.gamma;
          rep.witness_ball = guard.ball;
          rep.error_bound = guard.error;
          rep.method = Method::grid_refined;
          rep.diagnostics = "off-center ball exceeded the centered value";
        }
      }
      return rep;
    }
    const auto found = detail::radial_ball_search(*prof, p, q, cfg, hints);
    rep.value = found.value;
    rep.witness_gamma = found.gamma;
    rep.witness_ball = found.ball;
    rep.error_bound = found.error;
    rep.method = Method::grid_refined;
    return rep;
  }
  if (!cfg.allow_mc) throw unsupported_function("no analytic path for this function and Monte Carlo is disabled");
  const auto found = detail::mc_ball_search(f, p, q, cfg, hints);
  rep.method = Method::monte_carlo;
  rep.value = found.value;
  rep.unbounded = found.unbounded;
  rep.witness_gamma = found.gamma;
  rep.witness_ball = found.ball;
  rep.error_bound = found.error;
  if (found.unbounded) rep.diagnostics = "unbounded: objective still growing at the edge of the radius grid";
  return rep;
}

struct InclusionReport {
  double p1 = 1.0;
  double p2 = 1.0;
  double q = 1.0;
  QuasinormReport norm_p1;
  QuasinormReport norm_p2;
  double tolerance = 0.0;
  bool verdict = false;

  friend bool operator==(const InclusionReport&, const InclusionReport&) = default;
};

inline constexpr double kVerdictRelSlack = 1e-9;

// ||f||_{wM^{p1}_q} <= ||f||_{wM^{p2}_q} for 1 <= p1 <= p2 <= q.
inline InclusionReport check_inclusion(const FunctionExpr& f, double p1, double p2, double q,
                                       const SearchConfig& cfg = {}) {
  if (!(p1 >= 1.0) || p1 > p2 || p2 > q || !std::isfinite(q))
    throw invalid_exponent("inclusion needs 1 <= p1 <= p2 <= q < inf");
  InclusionReport rep{p1, p2, q, {}, {}, 0.0, false};
  rep.norm_p1 = weak_morrey_norm(f, p1, q, cfg);
  std::vector<Ball> hints;
  if (rep.norm_p1.witness_ball) hints.push_back(*rep.norm_p1.witness_ball);
  rep.norm_p2 = weak_morrey_norm(f, p2, q, cfg, hints);
  const double a = rep.norm_p1.value;
  const double b = rep.norm_p2.value;
  if (b == kInf) {
    rep.verdict = true;
  } else if (a == kInf) {
    rep.verdict = false;
  } else {
    rep.tolerance = rep.norm_p1.error_bound + rep.norm_p2.error_bound + kVerdictRelSlack * std::max(a, b);
    rep.verdict = a <= b + rep.tolerance;
  }
  return rep;
}

}  // namespace weakmorrey
