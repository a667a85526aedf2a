#pragma once

// Exponent arithmetic and the Hölder constants for weak Morrey spaces.
//
// For factor exponents p_1..p_m the harmonic exponent is 1/p* = sum 1/p_i.
// Three constants bound the product quasinorm:
//   c_new = prod (p_i / p*)^(1/p_i)
//   c_mid = m^(1/p*)
//   c_old = m
// and c_new <= c_mid <= c_old, with c_new == c_mid iff all p_i agree.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "weakmorrey/error.hpp"

namespace weakmorrey {

inline constexpr double kSystemRelTol = 1e-12;
inline constexpr double kEqualityRelTol = 1e-12;

inline bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

struct ExponentPair {
  double p = 1.0;
  double q = 1.0;

  friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

inline void validate(const ExponentPair& e, const std::string& label = "exponent pair") {
  if (!std::isfinite(e.p) || !std::isfinite(e.q))
    throw invalid_exponent(label + ": exponents must be finite");
  if (e.p < 1.0) throw invalid_exponent(label + ": p = " + std::to_string(e.p) + " < 1");
  if (e.p > e.q)
    throw invalid_exponent(label + ": p = " + std::to_string(e.p) + " > q = " + std::to_string(e.q));
}

inline double harmonic_conjugate(std::span<const double> p_list) {
  if (p_list.empty()) throw invalid_exponent("exponent list is empty");
  const bool uniform = std::all_of(p_list.begin(), p_list.end(), [&](double p) { return p == p_list.front(); });
  double inv = 0.0;
  for (double p : p_list) {
    if (!(p >= 1.0) || !std::isfinite(p))
      throw invalid_exponent("exponent " + std::to_string(p) + " is not in [1, inf)");
    inv += 1.0 / p;
  }
  if (uniform) return p_list.front() / static_cast<double>(p_list.size());
  return 1.0 / inv;
}

inline double bound_new(std::span<const double> p_list) {
  const double p_star = harmonic_conjugate(p_list);
  // Accumulate in logs: the product of m terms stays accurate for large m.
  double log_c = 0.0;
  for (double p : p_list) log_c += std::log(p / p_star) / p;
  return std::exp(log_c);
}

struct BoundComparison {
  double c_new = 1.0;
  double c_mid = 1.0;
  double c_old = 1.0;
  double p_star = 1.0;
  std::size_t m = 1;
  bool all_equal = true;
  // Some p_i == 1: the chain is outside the range where it is usually stated.
  bool has_unit_exponent = false;
  // p* < 1: m^{1/p*} exceeds m and the chain's second link does not apply.
  bool pstar_below_one = false;

  friend bool operator==(const BoundComparison&, const BoundComparison&) = default;
};

inline BoundComparison bound_comparison(std::span<const double> p_list) {
  BoundComparison out;
  out.p_star = harmonic_conjugate(p_list);
  out.m = p_list.size();
  out.c_new = bound_new(p_list);
  out.c_old = static_cast<double>(out.m);
  out.c_mid = std::pow(out.c_old, 1.0 / out.p_star);
  out.all_equal = std::all_of(p_list.begin(), p_list.end(),
                              [&](double p) { return nearly_equal(p, p_list.front(), kEqualityRelTol); });
  out.has_unit_exponent = std::any_of(p_list.begin(), p_list.end(), [](double p) { return p == 1.0; });
  out.pstar_below_one = out.p_star < 1.0;
  return out;
}

struct WeightedMeanInput {
  std::vector<double> x;
  std::vector<double> w;

  double w_total() const { return std::accumulate(w.begin(), w.end(), 0.0); }
};

struct WeightedMeans {
  double geo = 0.0;
  double arith = 0.0;
  bool is_equality = false;
};

inline WeightedMeans weighted_am_gm(const WeightedMeanInput& in) {
  if (in.x.empty() || in.x.size() != in.w.size())
    throw input_error("weighted mean: x and w must be non-empty and of equal length");
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    if (!(in.x[i] > 0.0) || !(in.w[i] > 0.0))
      throw input_error("weighted mean: all x_i and w_i must be positive");
  }
  const double w = in.w_total();
  double log_geo = 0.0;
  double arith = 0.0;
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    log_geo += in.w[i] * std::log(in.x[i]);
    arith += in.w[i] * in.x[i];
  }
  WeightedMeans out;
  out.arith = arith / w;
  out.is_equality = std::all_of(in.x.begin(), in.x.end(),
                                [&](double xi) { return nearly_equal(xi, in.x.front(), kEqualityRelTol); });
  out.geo = std::exp(log_geo / w);
  return out;
}

// The m exponent pairs (p_i, q_i), the target (p, q) and p*.
class ExponentSystem {
 public:
  ExponentSystem(std::vector<ExponentPair> factors, ExponentPair target)
      : factors_(std::move(factors)), target_(target) {
    if (factors_.empty()) throw invalid_system("exponent system needs at least one factor pair");
    validate(target_, "target pair");
    double inv_p = 0.0;
    double inv_q = 0.0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      validate(factors_[i], "pair " + std::to_string(i + 1));
      inv_p += 1.0 / factors_[i].p;
      inv_q += 1.0 / factors_[i].q;
    }
    if (!nearly_equal(inv_q, 1.0 / target_.q, kSystemRelTol)) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "sum of 1/q_i = " << inv_q << " != 1/q = " << 1.0 / target_.q;
      throw invalid_system(msg.str());
    }
    if (inv_p > 1.0 / target_.p + kSystemRelTol) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "sum of 1/p_i = " << inv_p << " > 1/p = " << 1.0 / target_.p;
      throw invalid_system(msg.str());
    }
    p_star_ = harmonic_conjugate(p_list());
  }

  std::size_t m() const noexcept { return factors_.size(); }
  const std::vector<ExponentPair>& factors() const noexcept { return factors_; }
  const ExponentPair& target() const noexcept { return target_; }
  double p_star() const noexcept { return p_star_; }

  std::vector<double> p_list() const {
    std::vector<double> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.p);
    return out;
  }

  friend bool operator==(const ExponentSystem& a, const ExponentSystem& b) {
    return a.factors_ == b.factors_ && a.target_ == b.target_;
  }

 private:
  std::vector<ExponentPair> factors_;
  ExponentPair target_;
  double p_star_ = 1.0;
};

}  // namespace weakmorrey
