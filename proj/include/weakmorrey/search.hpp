#pragma once

// Derivative-free maximizers: golden-section on an interval and a bounded
// compass (coordinate pattern) search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace weakmorrey::search {

struct ScalarMax {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

template <class F>
ScalarMax golden_section_max(F&& f, double a, double b, std::size_t iterations = 80, double x_tol = 1e-12) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (std::size_t i = 0; i < iterations && std::abs(b - a) > x_tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
}

struct PatternResult {
  std::vector<double> x;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

struct PatternOptions {
  std::size_t max_evaluations = 200;
  double shrink = 0.5;
  double min_step = 1e-10;
};

// Maximizes f over the box [lo, hi] starting at x0. Opportunistic polling in
// coordinate order (+e_i before -e_i); the step shrinks after an
// unsuccessful sweep. The sequence of evaluated points depends only on the
// inputs, so a longer budget extends a shorter run.
template <class F>
PatternResult pattern_search_max(F&& f, std::vector<double> x0, std::vector<double> step,
                                 const std::vector<double>& lo, const std::vector<double>& hi,
                                 const PatternOptions& opt = {}) {
  const std::size_t dim = x0.size();
  PatternResult best;
  if (opt.max_evaluations == 0) return best;
  for (std::size_t i = 0; i < dim; ++i) x0[i] = std::clamp(x0[i], lo[i], hi[i]);
  best.x = x0;
  best.value = f(best.x);
  best.evaluations = 1;
  auto active = [&] {
    for (std::size_t i = 0; i < dim; ++i)
      if (step[i] > opt.min_step && hi[i] > lo[i]) return true;
    return false;
  };
  std::vector<double> trial(dim);
  while (best.evaluations < opt.max_evaluations && active()) {
    bool improved = false;
    for (std::size_t i = 0; i < dim && !improved; ++i) {
      if (!(hi[i] > lo[i]) || step[i] <= opt.min_step) continue;
      for (double sign : {1.0, -1.0}) {
        trial = best.x;
        trial[i] = std::clamp(best.x[i] + sign * step[i], lo[i], hi[i]);
        if (trial[i] == best.x[i]) continue;
        if (best.evaluations >= opt.max_evaluations) break;
        const double v = f(trial);
        ++best.evaluations;
        if (v > best.value) {
          best.value = v;
          best.x = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved)
      for (auto& s : step) s *= opt.shrink;
  }
  return best;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1 || lo == hi) return {lo};
  const double a = std::log(lo);
  const double b = std::log(hi);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace weakmorrey::search
