// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "weakmorrey.hpp"
#include "weakmorrey/serialize.hpp"

using namespace weakmorrey;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += "; over the time limit";
  }
  if (!o.pass) ++failures;
  const std::string limit = limit_seconds > 0 ? fmt("limit %.0f s", limit_seconds) : "no time limit";
  std::printf("%s criterion %d: %s (%s; %.2f s, %s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              limit.c_str());
  std::fflush(stdout);
}


// Exponents p_i in [1.01, 20] with sum 1/p_i <= 1, so that p* >= 1 and the
// list can head a valid exponent system. Returns the number of rejected draws.
std::size_t draw_p(std::mt19937_64& rng, std::size_t m, std::vector<double>& p) {
  std::uniform_real_distribution<double> u(1.01, 20.0);
  std::size_t rejected = 0;
  while (true) {
    p.assign(m, 0.0);
    double s = 0;
    for (auto& x : p) {
      x = u(rng);
      s += 1 / x;
    }
    if (s <= 1.0) return rejected;
    ++rejected;
  }
}

Outcome constant_chain() {
  std::mt19937_64 rng(1001);
  std::size_t violations = 0, rejected = 0, eq_checked = 0, eq_bad = 0;
  std::vector<double> p;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t m = 2 + t % 7;
    rejected += draw_p(rng, m, p);
    // The same list must form a valid system: q_i = p_i, p = q = p*.
    std::vector<ExponentPair> pairs;
    for (double x : p) pairs.push_back({x, x});
    const ExponentSystem sys(pairs, {harmonic_conjugate(p), harmonic_conjugate(p)});
    const auto b = bound_comparison(sys.p_list());
    if (!(b.c_new <= b.c_mid * (1 + 1e-12)) || !(b.c_mid <= b.c_old * (1 + 1e-12))) ++violations;
  }
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 2 + t % 7;
    const double pe = std::uniform_real_distribution<double>(std::max(1.01, double(m)), 20.0)(rng);
    const auto b = bound_comparison(std::vector<double>(m, pe));
    ++eq_checked;
    if (!(std::abs(b.c_new - b.c_mid) <= 1e-12 * b.c_mid) || !b.all_equal) ++eq_bad;
  }
  return {violations == 0 && eq_bad == 0,
          std::to_string(violations) + " chain violations in 10000 systems (" + std::to_string(rejected) +
              " draws with p* < 1 rejected), " + std::to_string(eq_bad) + "/" + std::to_string(eq_checked) +
              " equal-exponent mismatches"};
}

Outcome split_oracle() {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> ua(-3, 3), up(1.01, 20.0), ut(-2, 2);
  std::size_t beaten = 0, identity_bad = 0;
  double worst_gap = -kInf;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 2 + t % 2;
    std::vector<double> a(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = std::exp(ua(rng));
      p[i] = up(rng);
    }
    const double theta = std::exp(ut(rng));
    const auto s = optimal_split(a, p, theta);

    const double ps = harmonic_conjugate(p);
    double displayed = std::pow(theta, -ps);
    for (std::size_t j = 0; j < m; ++j) displayed *= std::pow(p[j] / ps, ps / p[j]) * std::pow(a[j], ps / p[j]);
    if (!(std::abs(s.objective - displayed) <= 1e-10 * displayed)) ++identity_bad;

    // 10^4 feasible points: y_1 (and y_2) on a log-grid, the last y forced.
    const int per_axis = m == 2 ? 10000 : 100;
    const double lo = -8, hi = 8;
    double grid_best = kInf;
    auto eval = [&](const std::vector<double>& logs) {
      double obj = 0, rest = -std::log(theta);
      for (std::size_t i = 0; i + 1 < m; ++i) {
        obj += a[i] * std::exp(p[i] * logs[i]);
        rest -= logs[i];
      }
      return obj + a[m - 1] * std::exp(p[m - 1] * rest);
    };
    std::vector<double> logs(m - 1);
    for (int i = 0; i < per_axis; ++i) {
      logs[0] = lo + (hi - lo) * i / (per_axis - 1);
      if (m == 2) {
        grid_best = std::min(grid_best, eval(logs));
      } else {
        for (int k = 0; k < per_axis; ++k) {
          logs[1] = lo + (hi - lo) * k / (per_axis - 1);
          grid_best = std::min(grid_best, eval(logs));
        }
      }
    }
    if (s.objective > grid_best * (1 + 1e-6)) ++beaten;
    worst_gap = std::max(worst_gap, (s.objective - grid_best) / grid_best);
  }
  return {beaten == 0 && identity_bad == 0, std::to_string(beaten) + " grid points below the closed form, " +
                                                std::to_string(identity_bad) + " identity mismatches, closest grid point at rel " +
                                                fmt("%.2e", worst_gap)};
}

Outcome closed_forms() {
  std::size_t bad_analytic = 0, bad_mc = 0, bad_morrey = 0;
  double worst_sigma = 0, worst_morrey = 0;
  std::uint64_t seed = 3000;
  for (std::size_t n : {1u, 2u, 3u})
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      const double dn = static_cast<double>(n);
      const auto f = power(1, dn / p, Point(n, 0.0));
      const Ball ball = Ball::origin(n, 1.0);
      const double want = std::pow(unit_ball_volume(n), 1 / p);
      const auto rep = weak_lebesgue_norm(f, ball, p);
      if (rep.method != Method::analytic || !(std::abs(rep.value - want) <= 1e-9 * want)) ++bad_analytic;

      // Independent sampling oracle on the plateau, superlevel radius r/2 and r/4.
      for (double rho : {0.5, 0.25}) {
        const double gamma = std::pow(rho, -dn / p);
        const auto est = distribution_mc(DistributionQuery(f, ball, gamma), 1000000, seed++);
        const double val = gamma * std::pow(est.estimate, 1 / p);
        const double sigma = gamma / p * std::pow(est.estimate, 1 / p - 1) * est.std_error;
        const double dev = std::abs(val - rep.value) / sigma;
        worst_sigma = std::max(worst_sigma, dev);
        if (!(dev <= 4.0)) ++bad_mc;
      }

      for (double q : {p, 2 * p}) {
        const auto g = power(1, dn / q, Point(n, 0.0));
        const double wq = std::pow(unit_ball_volume(n), 1 / q);
        const auto m = weak_morrey_norm(g, p, q);
        const double rel = std::abs(m.value - wq) / wq;
        worst_morrey = std::max(worst_morrey, rel);
        if (!(rel <= 1e-4)) ++bad_morrey;
      }
    }
  return {bad_analytic + bad_mc + bad_morrey == 0,
          std::to_string(bad_analytic) + " analytic, " + std::to_string(bad_mc) + " Monte Carlo (max " +
              fmt("%.2f", worst_sigma) + " sigma), " + std::to_string(bad_morrey) + " weak Morrey (max rel " +
              fmt("%.1e", worst_morrey) + ") failures over n in {1,2,3}, p in {1,1.5,2,4}"};
}

Outcome holder_verdicts() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> u(0, 1), uc(-2, 2), ua(0.2, 5);
  std::size_t bad = 0;
  double worst = 0;
  std::vector<double> p;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 3, m = 2 + t % 3;
    draw_p(rng, m, p);
    std::vector<ExponentPair> pairs;
    double inv_q = 0;
    for (double x : p) {
      pairs.push_back({x, x * (1 + 2 * u(rng))});
      inv_q += 1 / pairs.back().q;
    }
    const double ps = harmonic_conjugate(p);
    const ExponentSystem sys(pairs, {1 + (ps - 1) * u(rng), 1 / inv_q});
    Point c(n);
    for (auto& x : c) x = uc(rng);
    std::vector<FunctionExpr> fs;
    for (const auto& pr : pairs) fs.push_back(power(ua(rng), static_cast<double>(n) / pr.q, c));
    const auto rep = check_holder(fs, sys);
    worst = std::max(worst, rep.ratio / rep.c_new);
    const bool ok = rep.verdict && rep.ratio <= rep.c_new && rep.c_new < static_cast<double>(m) &&
                    rep.c_new <= rep.c_mid * (1 + 1e-12);
    if (!ok) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " failures in 200 tuples, max ratio / C_new = " + fmt("%.6f", worst)};
}

Outcome inclusion() {
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> u(0, 1), uc(-2, 2), ur(0.2, 3);
  std::size_t bad = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 3;
    const double dn = static_cast<double>(n);
    const double p1 = 1 + 3 * u(rng);
    const double p2 = p1 + 3 * u(rng);
    const double q = p2 * (1 + u(rng));
    Point c(n);
    for (auto& x : c) x = uc(rng);
    const double r = ur(rng);
    FunctionExpr f = power(1, 0, c);
    switch (t % 4) {
      case 0:
        f = power(ur(rng), dn / q, c);
        break;
      case 1:
        f = product({power(ur(rng), u(rng) * dn / q, c), indicator(1, Ball(c, r))});
        break;
      case 2:
        f = step(c, {r, r * (1 + ur(rng))}, {ur(rng), ur(rng)});
        break;
      default:
        f = product({power(ur(rng), dn / q, c), step(c, {r, 2 * r}, {2, 1})});
        break;
    }
    const auto rep = check_inclusion(f, p1, p2, q);
    if (!rep.verdict) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " violations in 200 checks"};
}

Outcome union_bound() {
  const auto f = power(1, 0.5, {0.0});
  const auto rep = union_bound_check({f, f}, Ball({0.0}, 1), 4, {0.5, 0.5});
  const bool ok = rep.lhs == 0.5 && rep.rhs == 1.0 && rep.verdict && rep.method == Method::analytic;
  return {ok, "lhs = " + fmt("%.17g", rep.lhs) + ", rhs = " + fmt("%.17g", rep.rhs)};
}

Outcome equal_share() {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> ua(-3, 3), up(1.01, 20), ut(-2, 2);
  std::size_t bad_equal = 0, bad_factor = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 2 + t % 4;
    std::vector<double> a(m), p(m, up(rng));
    for (auto& x : a) x = std::exp(ua(rng));
    const auto s = optimal_split(a, p, std::exp(ut(rng)));
    for (std::size_t i = 0; i < m; ++i)
      if (!(std::abs(s.equal_share_y[i] - s.y[i]) <= 1e-10 * s.y[i])) ++bad_equal;
  }
  const double factor = std::pow(2.0, -1.0) * std::pow(3.0, 1.0 / 3) * std::pow(1.5, 1.0 / 1.5);
  for (int t = 0; t < 500; ++t) {
    const auto s = optimal_split({std::exp(ua(rng)), std::exp(ua(rng))}, {3, 1.5}, std::exp(ut(rng)));
    if (!(std::abs(s.equal_share_constraint_product - factor) <= 1e-10 * factor) ||
        !(std::abs(s.equal_share_predicted_factor - factor) <= 1e-10 * factor) || s.equal_share_feasible)
      ++bad_factor;
  }
  return {bad_equal + bad_factor == 0, std::to_string(bad_equal) + " equal-exponent mismatches, " +
                                           std::to_string(bad_factor) + " mismatches of the factor " +
                                           fmt("%.10f", factor) + " for p = (3, 1.5)"};
}

Outcome sharpness_probe() {
  const ExponentSystem sys({{2, 2}, {2, 2}}, {1, 1});
  FamilyConfig fam;
  fam.kind = FamilyKind::truncated_powers;
  fam.n = 1;
  const auto a = search_extremal(sys, fam, 2000, 7);
  const auto b = search_extremal(sys, fam, 2000, 7);
  const bool same = a == b && json(a).dump() == json(b).dump();
  const bool in_range = a.best_ratio >= 1.0 && a.best_ratio <= 2.0;
  return {same && in_range, "best_ratio = " + fmt("%.12g", a.best_ratio) + " over " + std::to_string(a.trials) +
                                " trials, " + (same ? "bit-identical" : "NOT identical") + " across two runs"};
}

}  // namespace

int main() {
  criterion(1, "constant chain C_new <= m^(1/p*) <= m", 1, constant_chain);
  criterion(2, "optimal split against a feasible grid", 30, split_oracle);
  criterion(3, "quasinorm closed forms", 120, closed_forms);
  criterion(4, "Hölder verdicts for co-centered powers", 300, holder_verdicts);
  criterion(5, "inclusion between weak Morrey spaces", 0, inclusion);
  criterion(6, "union bound worked case", 1, union_bound);
  criterion(7, "equal-share split against the constrained split", 1, equal_share);
  criterion(8, "sharpness probe", 600, sharpness_probe);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
