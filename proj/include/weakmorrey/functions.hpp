#pragma once

// The measurable function family and its distribution function
//   d_f(gamma; B) = |{x in B : |f(x)| > gamma}|.
//
// Every member is nonnegative. Radial members (powers, ball indicators,
// radial steps, and products of those sharing one center) reduce to a
// RadialProfile: a piecewise function k_j * s^(-alpha) of s = |x - center|,
// whose superlevel sets are finite unions of annuli. Distributions of
// profiles are exact; everything else goes through distribution_mc.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weakmorrey/error.hpp"
#include "weakmorrey/geometry.hpp"

namespace weakmorrey {

struct RadialPower {
  double c = 1.0;
  double alpha = 0.0;
  Point center;
};

struct BallIndicator {
  double c = 1.0;
  Ball support = Ball::origin(1, 1.0);
};

// values[j] is taken on the annulus breaks[j-1] <= |x - center| < breaks[j]
// (breaks[-1] = 0); zero outside the last break.
struct RadialStep {
  Point center;
  std::vector<double> breaks;
  std::vector<double> values;
};

class FunctionExpr;

struct Product {
  std::vector<FunctionExpr> factors;
};

class FunctionExpr {
 public:
  using Variant = std::variant<RadialPower, BallIndicator, RadialStep, Product>;

  FunctionExpr(RadialPower f);
  FunctionExpr(BallIndicator f);
  FunctionExpr(RadialStep f);
  FunctionExpr(Product f);

  const Variant& node() const noexcept { return node_; }
  std::size_t dimension() const noexcept { return dimension_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&node_);
  }

 private:
  Variant node_;
  std::size_t dimension_ = 0;
};

bool operator==(const FunctionExpr& a, const FunctionExpr& b);

inline bool operator==(const RadialPower& a, const RadialPower& b) {
  return a.c == b.c && a.alpha == b.alpha && a.center == b.center;
}
inline bool operator==(const BallIndicator& a, const BallIndicator& b) {
  return a.c == b.c && a.support == b.support;
}
inline bool operator==(const RadialStep& a, const RadialStep& b) {
  return a.center == b.center && a.breaks == b.breaks && a.values == b.values;
}
inline bool operator==(const Product& a, const Product& b) { return a.factors == b.factors; }

inline bool operator==(const FunctionExpr& a, const FunctionExpr& b) { return a.node() == b.node(); }

namespace detail {

inline void check_finite_center(const Point& center) {
  check_dimension(center.size());
  for (double x : center)
    if (!std::isfinite(x)) throw input_error("function center must be finite");
}

}  // namespace detail

inline FunctionExpr::FunctionExpr(RadialPower f) : node_(std::move(f)) {
  const auto& p = std::get<RadialPower>(node_);
  detail::check_finite_center(p.center);
  if (!(p.c > 0.0) || !std::isfinite(p.c)) throw input_error("power amplitude must be positive and finite");
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) throw input_error("power exponent must be finite and >= 0");
  dimension_ = p.center.size();
}

inline FunctionExpr::FunctionExpr(BallIndicator f) : node_(std::move(f)) {
  const auto& b = std::get<BallIndicator>(node_);
  if (!(b.c > 0.0) || !std::isfinite(b.c)) throw input_error("indicator height must be positive and finite");
  dimension_ = b.support.dimension();
}

inline FunctionExpr::FunctionExpr(RadialStep f) : node_(std::move(f)) {
  const auto& s = std::get<RadialStep>(node_);
  detail::check_finite_center(s.center);
  if (s.breaks.empty() || s.breaks.size() != s.values.size())
    throw input_error("step needs as many breakpoints as values (at least one)");
  double prev = 0.0;
  for (double b : s.breaks) {
    if (!(b > prev) || !std::isfinite(b)) throw input_error("step breakpoints must be finite and strictly increasing from 0");
    prev = b;
  }
  for (double v : s.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw input_error("step values must be finite and >= 0");
  dimension_ = s.center.size();
}

inline FunctionExpr::FunctionExpr(Product f) : node_(std::move(f)) {
  const auto& p = std::get<Product>(node_);
  if (p.factors.empty()) throw input_error("product needs at least one factor");
  dimension_ = p.factors.front().dimension();
  for (const auto& g : p.factors)
    if (g.dimension() != dimension_) throw dimension_error("product factors have different dimensions");
}

inline FunctionExpr power(double c, double alpha, Point center) {
  return FunctionExpr(RadialPower{c, alpha, std::move(center)});
}
inline FunctionExpr indicator(double c, Ball support) { return FunctionExpr(BallIndicator{c, std::move(support)}); }
inline FunctionExpr step(Point center, std::vector<double> breaks, std::vector<double> values) {
  return FunctionExpr(RadialStep{std::move(center), std::move(breaks), std::move(values)});
}
inline FunctionExpr product(std::vector<FunctionExpr> factors) { return FunctionExpr(Product{std::move(factors)}); }

inline double evaluate(const FunctionExpr& f, std::span<const double> x) {
  if (x.size() != f.dimension())
    throw dimension_error("point has dimension " + std::to_string(x.size()) + ", function has " +
                          std::to_string(f.dimension()));
  struct Visitor {
    std::span<const double> x;
    double operator()(const RadialPower& p) const {
      if (p.alpha == 0.0) return p.c;
      const double s = distance(x, p.center);
      return s == 0.0 ? kInf : p.c * std::pow(s, -p.alpha);
    }
    double operator()(const BallIndicator& b) const {
      return distance(x, b.support.center()) < b.support.radius() ? b.c : 0.0;
    }
    double operator()(const RadialStep& st) const {
      const double s = distance(x, st.center);
      auto it = std::upper_bound(st.breaks.begin(), st.breaks.end(), s);
      return it == st.breaks.end() ? 0.0 : st.values[static_cast<std::size_t>(it - st.breaks.begin())];
    }
    double operator()(const Product& pr) const {
      double v = 1.0;
      for (const auto& g : pr.factors) {
        const double gv = evaluate(g, x);
        if (gv == 0.0) return 0.0;
        v *= gv;
      }
      return v;
    }
  };
  return std::visit(Visitor{x}, f.node());
}

// Multiplies f by c > 0.
inline FunctionExpr scale(const FunctionExpr& f, double c) {
  if (!(c > 0.0)) throw input_error("scale factor must be positive");
  struct Visitor {
    double c;
    FunctionExpr operator()(const RadialPower& p) const { return power(p.c * c, p.alpha, p.center); }
    FunctionExpr operator()(const BallIndicator& b) const { return indicator(b.c * c, b.support); }
    FunctionExpr operator()(const RadialStep& s) const {
      auto v = s.values;
      for (auto& x : v) x *= c;
      return step(s.center, s.breaks, std::move(v));
    }
    FunctionExpr operator()(const Product& p) const {
      auto factors = p.factors;
      factors.front() = scale(factors.front(), c);
      return product(std::move(factors));
    }
  };
  return std::visit(Visitor{c}, f.node());
}

// Radial profile: value coeff[j] * s^(-alpha) on outer[j-1] <= s < outer[j],
// with outer[-1] = 0 and outer.back() == +inf.
struct RadialProfile {
  Point center;
  double alpha = 0.0;
  std::vector<double> outer;
  std::vector<double> coeff;

  std::size_t dimension() const noexcept { return center.size(); }
  std::size_t pieces() const noexcept { return outer.size(); }
  double inner(std::size_t j) const noexcept { return j == 0 ? 0.0 : outer[j - 1]; }

  double value_at(double s) const {
    auto it = std::upper_bound(outer.begin(), outer.end(), s);
    if (it == outer.end()) return 0.0;
    const double k = coeff[static_cast<std::size_t>(it - outer.begin())];
    if (k == 0.0) return 0.0;
    if (alpha == 0.0) return k;
    return s == 0.0 ? kInf : k * std::pow(s, -alpha);
  }

  bool is_zero() const {
    return std::all_of(coeff.begin(), coeff.end(), [](double k) { return k == 0.0; });
  }

  // Radially nonincreasing iff the coefficients never increase.
  bool is_nonincreasing() const {
    for (std::size_t j = 1; j < coeff.size(); ++j)
      if (coeff[j] > coeff[j - 1]) return false;
    return true;
  }

  // A nonzero coefficient on the unbounded last piece.
  bool has_tail() const { return coeff.back() > 0.0; }
  bool is_singular() const { return alpha > 0.0 && coeff.front() > 0.0; }

  // Largest finite breakpoint, or 0 when the profile has a single piece.
  double largest_break() const { return outer.size() > 1 ? outer[outer.size() - 2] : 0.0; }
};

namespace detail {

inline RadialProfile merge_profiles(const RadialProfile& a, const RadialProfile& b) {
  RadialProfile out;
  out.center = a.center;
  out.alpha = a.alpha + b.alpha;
  std::vector<double> cuts;
  std::merge(a.outer.begin(), a.outer.end(), b.outer.begin(), b.outer.end(), std::back_inserter(cuts));
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t ia = 0, ib = 0;
  for (double cut : cuts) {
    out.outer.push_back(cut);
    out.coeff.push_back(a.coeff[ia] * b.coeff[ib]);
    if (a.outer[ia] == cut && ia + 1 < a.outer.size()) ++ia;
    if (b.outer[ib] == cut && ib + 1 < b.outer.size()) ++ib;
  }
  return out;
}

inline void simplify(RadialProfile& p) {
  RadialProfile out{p.center, p.alpha, {}, {}};
  for (std::size_t j = 0; j < p.pieces(); ++j) {
    if (!out.coeff.empty() && out.coeff.back() == p.coeff[j]) {
      out.outer.back() = p.outer[j];
    } else {
      out.outer.push_back(p.outer[j]);
      out.coeff.push_back(p.coeff[j]);
    }
  }
  p = std::move(out);
}

}  // namespace detail

// Closed-form radial description, or nullopt when f has no common center.
inline std::optional<RadialProfile> radial_profile(const FunctionExpr& f) {
  struct Visitor {
    std::optional<RadialProfile> operator()(const RadialPower& p) const {
      return RadialProfile{p.center, p.alpha, {kInf}, {p.c}};
    }
    std::optional<RadialProfile> operator()(const BallIndicator& b) const {
      return RadialProfile{b.support.center(), 0.0, {b.support.radius(), kInf}, {b.c, 0.0}};
    }
    std::optional<RadialProfile> operator()(const RadialStep& s) const {
      RadialProfile out{s.center, 0.0, s.breaks, s.values};
      out.outer.push_back(kInf);
      out.coeff.push_back(0.0);
      return out;
    }
    std::optional<RadialProfile> operator()(const Product& pr) const {
      std::optional<RadialProfile> acc;
      for (const auto& g : pr.factors) {
        auto gp = radial_profile(g);
        if (!gp) return std::nullopt;
        if (!acc) {
          acc = std::move(gp);
        } else {
          if (gp->center != acc->center) return std::nullopt;
          acc = detail::merge_profiles(*acc, *gp);
        }
      }
      return acc;
    }
  };
  auto out = std::visit(Visitor{}, f.node());
  if (out) detail::simplify(*out);
  return out;
}

namespace detail {

inline void flatten(const FunctionExpr& f, std::vector<const FunctionExpr*>& out) {
  if (const auto* pr = f.as<Product>()) {
    for (const auto& g : pr->factors) flatten(g, out);
  } else {
    out.push_back(&f);
  }
}

}  // namespace detail

// Canonical form: a product of co-centered powers collapses to one power.
// Anything else is returned unchanged.
inline FunctionExpr reduce(const FunctionExpr& f) {
  if (!f.as<Product>()) return f;
  std::vector<const FunctionExpr*> leaves;
  detail::flatten(f, leaves);
  const auto* first = leaves.front()->as<RadialPower>();
  if (!first) return f;
  double c = 1.0;
  double alpha = 0.0;
  for (const auto* leaf : leaves) {
    const auto* p = leaf->as<RadialPower>();
    if (!p || p->center != first->center) return f;
    c *= p->c;
    alpha += p->alpha;
  }
  return power(c, alpha, first->center);
}

struct DistributionQuery {
  FunctionExpr function;
  Ball ball;
  double gamma;

  DistributionQuery(FunctionExpr f, Ball b, double g) : function(std::move(f)), ball(std::move(b)), gamma(g) {
    if (!(gamma > 0.0)) throw input_error("distribution threshold must be positive");
    if (function.dimension() != ball.dimension())
      throw dimension_error("function and ball dimensions differ");
  }
};

// Superlevel measure of a profile inside a ball. strict = false measures
// {f >= gamma}, i.e. the left limit d(gamma-).
inline double profile_distribution(const RadialProfile& prof, const Ball& ball, double gamma, bool strict = true) {
  const std::size_t n = ball.dimension();
  const double d = distance(ball.center(), prof.center);
  const double r = ball.radius();
  auto within = [&](double s) { return intersection_measure(n, d, r, s); };
  double total = 0.0;
  for (std::size_t j = 0; j < prof.pieces(); ++j) {
    const double k = prof.coeff[j];
    if (k == 0.0) continue;
    const double lo = prof.inner(j);
    const double hi = prof.outer[j];
    double top = hi;
    if (prof.alpha == 0.0) {
      if (strict ? !(k > gamma) : !(k >= gamma)) continue;
    } else {
      top = std::min(hi, std::pow(k / gamma, 1.0 / prof.alpha));
      if (!(top > lo)) continue;
    }
    total += within(top) - (lo > 0.0 ? within(lo) : 0.0);
  }
  return std::max(total, 0.0);
}

inline double distribution(const DistributionQuery& q) {
  auto prof = radial_profile(q.function);
  if (!prof) throw no_closed_form("function has no closed-form distribution (factors are not co-centered)");
  return profile_distribution(*prof, q.ball, q.gamma);
}

inline double distribution(const FunctionExpr& f, const Ball& b, double gamma) {
  return distribution(DistributionQuery(f, b, gamma));
}

inline bool has_closed_form(const FunctionExpr& f) { return radial_profile(f).has_value(); }

// Uniform point in a ball: Gaussian direction, radius r * U^(1/n).
template <class Rng>
void sample_in_ball(const Ball& ball, Rng& rng, Point& out) {
  const std::size_t n = ball.dimension();
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  out.resize(n);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& x : out) {
      x = normal(rng);
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double rad = ball.radius() * std::pow(unif(rng), 1.0 / static_cast<double>(n)) / std::sqrt(norm2);
  for (std::size_t i = 0; i < n; ++i) out[i] = ball.center()[i] + rad * out[i];
}

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

inline constexpr std::size_t kMinMcSamples = 1000;

inline McEstimate distribution_mc(const DistributionQuery& q, std::size_t samples, std::uint64_t seed) {
  if (samples < kMinMcSamples)
    throw input_error("Monte Carlo needs at least " + std::to_string(kMinMcSamples) + " samples");
  std::mt19937_64 rng(seed);
  Point x;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    sample_in_ball(q.ball, rng, x);
    if (evaluate(q.function, x) > q.gamma) ++hits;
  }
  const double vol = ball_measure(q.ball);
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {vol * frac, vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

}  // namespace weakmorrey
