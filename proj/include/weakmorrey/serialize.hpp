#pragma once

// JSON forms of configs and reports (nlohmann::json, ADL to_json/from_json).
// Non-finite reals are written as the strings "inf", "-inf" and "nan".

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakmorrey/bounds.hpp"
#include "weakmorrey/error.hpp"
#include "weakmorrey/geometry.hpp"
#include "weakmorrey/holder.hpp"
#include "weakmorrey/quasinorm.hpp"
#include "weakmorrey/sharpness.hpp"

namespace weakmorrey {

using json = nlohmann::json;

inline json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double get_real(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
    throw input_error("expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw input_error("expected a number, got " + j.dump());
  return j.get<double>();
}

inline json reals(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(real(x));
  return out;
}

inline std::vector<double> get_reals(const json& j) {
  if (!j.is_array()) throw input_error("expected an array of numbers, got " + j.dump());
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_real(x));
  return out;
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw input_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

// Ball ---------------------------------------------------------------------

inline void to_json(json& j, const Ball& b) { j = json{{"center", reals(b.center())}, {"radius", real(b.radius())}}; }

inline Ball ball_from_json(const json& j) { return Ball(get_reals(field(j, "center")), get_real(field(j, "radius"))); }

inline json optional_ball(const std::optional<Ball>& b) { return b ? json(*b) : json(nullptr); }

inline std::optional<Ball> get_optional_ball(const json& j) {
  if (j.is_null()) return std::nullopt;
  return ball_from_json(j);
}

// Exponent systems -------------------------------------------------------------

inline json system_to_json(const ExponentSystem& sys, std::size_t n) {
  json pairs = json::array();
  for (const auto& f : sys.factors()) pairs.push_back({real(f.p), real(f.q)});
  return json{{"n", n}, {"pairs", pairs}, {"target", {real(sys.target().p), real(sys.target().q)}}};
}

inline ExponentPair pair_from_json(const json& j, const std::string& label) {
  if (!j.is_array() || j.size() != 2) throw invalid_system(label + " must be a [p, q] pair");
  return {get_real(j[0]), get_real(j[1])};
}

inline ExponentSystem system_from_json(const json& j, std::size_t* n = nullptr) {
  if (n) {
    const auto& nj = field(j, "n");
    if (!nj.is_number_integer() || nj.get<long>() < 1) throw invalid_system("\"n\" must be a positive integer");
    *n = nj.get<std::size_t>();
  }
  const auto& pj = field(j, "pairs");
  if (!pj.is_array()) throw invalid_system("\"pairs\" must be an array of [p, q] pairs");
  std::vector<ExponentPair> pairs;
  for (std::size_t i = 0; i < pj.size(); ++i) pairs.push_back(pair_from_json(pj[i], "pair " + std::to_string(i + 1)));
  return ExponentSystem(std::move(pairs), pair_from_json(field(j, "target"), "target"));
}

// Search config ----------------------------------------------------------------

inline void to_json(json& j, const SearchConfig& c) {
  j = json{{"radius_min", c.radius_min},
           {"radius_max", c.radius_max},
           {"radius_grid", c.radius_grid},
           {"refine_rounds", c.refine_rounds},
           {"center_grid", c.center_grid},
           {"starts", c.starts},
           {"polish_evaluations", c.polish_evaluations},
           {"gamma_grid", c.gamma_grid},
           {"rel_tol", c.rel_tol},
           {"mc_samples", c.mc_samples},
           {"mc_search_samples", c.mc_search_samples},
           {"mc_random_centers", c.mc_random_centers},
           {"seed", c.seed},
           {"allow_analytic", c.allow_analytic},
           {"allow_mc", c.allow_mc},
           {"center_guard", c.center_guard}};
}

// Missing keys keep their defaults.
inline void from_json(const json& j, SearchConfig& c) {
  if (!j.is_object()) throw input_error("search config must be an object");
  auto opt = [&](const char* k, auto& v) {
    if (j.contains(k)) v = j.at(k).get<std::decay_t<decltype(v)>>();
  };
  opt("radius_min", c.radius_min);
  opt("radius_max", c.radius_max);
  opt("radius_grid", c.radius_grid);
  opt("refine_rounds", c.refine_rounds);
  opt("center_grid", c.center_grid);
  opt("starts", c.starts);
  opt("polish_evaluations", c.polish_evaluations);
  opt("gamma_grid", c.gamma_grid);
  opt("rel_tol", c.rel_tol);
  opt("mc_samples", c.mc_samples);
  opt("mc_search_samples", c.mc_search_samples);
  opt("mc_random_centers", c.mc_random_centers);
  opt("seed", c.seed);
  opt("allow_analytic", c.allow_analytic);
  opt("allow_mc", c.allow_mc);
  opt("center_guard", c.center_guard);
  if (!(c.radius_min > 0.0) || !(c.radius_max > c.radius_min))
    throw input_error("search radius bounds must satisfy 0 < radius_min < radius_max");
  if (c.mc_samples < kMinMcSamples || c.mc_search_samples < kMinMcSamples)
    throw input_error("Monte Carlo sample counts must be at least " + std::to_string(kMinMcSamples));
}

// Reports ------------------------------------------------------------------

inline void to_json(json& j, const QuasinormReport& r) {
  j = json{{"value", real(r.value)},
           {"witness_gamma", real(r.witness_gamma)},
           {"witness_ball", optional_ball(r.witness_ball)},
           {"method", to_string(r.method)},
           {"error_bound", real(r.error_bound)},
           {"unbounded", r.unbounded},
           {"diagnostics", r.diagnostics}};
}

inline void from_json(const json& j, QuasinormReport& r) {
  r.value = get_real(field(j, "value"));
  r.witness_gamma = get_real(field(j, "witness_gamma"));
  r.witness_ball = get_optional_ball(field(j, "witness_ball"));
  r.method = method_from_string(field(j, "method").get<std::string>());
  r.error_bound = get_real(field(j, "error_bound"));
  r.unbounded = field(j, "unbounded").get<bool>();
  r.diagnostics = field(j, "diagnostics").get<std::string>();
}

inline void to_json(json& j, const InclusionReport& r) {
  j = json{{"p1", real(r.p1)},           {"p2", real(r.p2)},           {"q", real(r.q)},
           {"norm_p1", r.norm_p1},       {"norm_p2", r.norm_p2},       {"tolerance", real(r.tolerance)},
           {"verdict", r.verdict}};
}

inline void from_json(const json& j, InclusionReport& r) {
  r.p1 = get_real(field(j, "p1"));
  r.p2 = get_real(field(j, "p2"));
  r.q = get_real(field(j, "q"));
  r.norm_p1 = field(j, "norm_p1").get<QuasinormReport>();
  r.norm_p2 = field(j, "norm_p2").get<QuasinormReport>();
  r.tolerance = get_real(field(j, "tolerance"));
  r.verdict = field(j, "verdict").get<bool>();
}

inline void to_json(json& j, const BoundComparison& b) {
  j = json{{"c_new", real(b.c_new)}, {"c_mid", real(b.c_mid)},   {"c_old", real(b.c_old)},
           {"p_star", real(b.p_star)}, {"m", b.m},             {"all_equal", b.all_equal},
           {"has_unit_exponent", b.has_unit_exponent}, {"pstar_below_one", b.pstar_below_one}};
}

inline void from_json(const json& j, BoundComparison& b) {
  b.c_new = get_real(field(j, "c_new"));
  b.c_mid = get_real(field(j, "c_mid"));
  b.c_old = get_real(field(j, "c_old"));
  b.p_star = get_real(field(j, "p_star"));
  b.m = field(j, "m").get<std::size_t>();
  b.all_equal = field(j, "all_equal").get<bool>();
  b.has_unit_exponent = field(j, "has_unit_exponent").get<bool>();
  b.pstar_below_one = field(j, "pstar_below_one").get<bool>();
}

inline void to_json(json& j, const ThresholdSplit& s) {
  j = json{{"a", reals(s.a)},
           {"p", reals(s.p)},
           {"theta", real(s.theta)},
           {"p_star", real(s.p_star)},
           {"lambda", real(s.lambda)},
           {"y", reals(s.y)},
           {"objective", real(s.objective)},
           {"closed_form_bound", real(s.closed_form_bound)},
           {"constraint_product", real(s.constraint_product)},
           {"equal_share_y", reals(s.equal_share_y)},
           {"equal_share_objective", real(s.equal_share_objective)},
           {"equal_share_constraint_product", real(s.equal_share_constraint_product)},
           {"equal_share_predicted_factor", real(s.equal_share_predicted_factor)},
           {"equal_share_feasible", s.equal_share_feasible}};
}

inline void from_json(const json& j, ThresholdSplit& s) {
  s.a = get_reals(field(j, "a"));
  s.p = get_reals(field(j, "p"));
  s.theta = get_real(field(j, "theta"));
  s.p_star = get_real(field(j, "p_star"));
  s.lambda = get_real(field(j, "lambda"));
  s.y = get_reals(field(j, "y"));
  s.objective = get_real(field(j, "objective"));
  s.closed_form_bound = get_real(field(j, "closed_form_bound"));
  s.constraint_product = get_real(field(j, "constraint_product"));
  s.equal_share_y = get_reals(field(j, "equal_share_y"));
  s.equal_share_objective = get_real(field(j, "equal_share_objective"));
  s.equal_share_constraint_product = get_real(field(j, "equal_share_constraint_product"));
  s.equal_share_predicted_factor = get_real(field(j, "equal_share_predicted_factor"));
  s.equal_share_feasible = field(j, "equal_share_feasible").get<bool>();
}

inline void to_json(json& j, const UnionBoundReport& r) {
  j = json{{"theta", real(r.theta)},
           {"y", reals(r.y)},
           {"thresholds", reals(r.thresholds)},
           {"constraint_product", real(r.constraint_product)},
           {"lhs", real(r.lhs)},
           {"rhs", real(r.rhs)},
           {"tolerance", real(r.tolerance)},
           {"verdict", r.verdict},
           {"method", to_string(r.method)}};
}

inline void from_json(const json& j, UnionBoundReport& r) {
  r.theta = get_real(field(j, "theta"));
  r.y = get_reals(field(j, "y"));
  r.thresholds = get_reals(field(j, "thresholds"));
  r.constraint_product = get_real(field(j, "constraint_product"));
  r.lhs = get_real(field(j, "lhs"));
  r.rhs = get_real(field(j, "rhs"));
  r.tolerance = get_real(field(j, "tolerance"));
  r.verdict = field(j, "verdict").get<bool>();
  r.method = method_from_string(field(j, "method").get<std::string>());
}

inline void to_json(json& j, const HolderReport& r) {
  j = json{{"lhs", r.lhs},
           {"lhs_pstar", r.lhs_pstar},
           {"factor_norms", r.factor_norms},
           {"p_star", real(r.p_star)},
           {"c_new", real(r.c_new)},
           {"c_mid", real(r.c_mid)},
           {"c_old", real(r.c_old)},
           {"ratio", real(r.ratio)},
           {"tolerance", real(r.tolerance)},
           {"verdict", r.verdict},
           {"pstar_verdict", r.pstar_verdict},
           {"inclusion_holds", r.inclusion_holds}};
}

inline void from_json(const json& j, HolderReport& r) {
  r.lhs = field(j, "lhs").get<QuasinormReport>();
  r.lhs_pstar = field(j, "lhs_pstar").get<QuasinormReport>();
  r.factor_norms = field(j, "factor_norms").get<std::vector<QuasinormReport>>();
  r.p_star = get_real(field(j, "p_star"));
  r.c_new = get_real(field(j, "c_new"));
  r.c_mid = get_real(field(j, "c_mid"));
  r.c_old = get_real(field(j, "c_old"));
  r.ratio = get_real(field(j, "ratio"));
  r.tolerance = get_real(field(j, "tolerance"));
  r.verdict = field(j, "verdict").get<bool>();
  r.pstar_verdict = field(j, "pstar_verdict").get<bool>();
  r.inclusion_holds = field(j, "inclusion_holds").get<bool>();
}

// Sharpness ----------------------------------------------------------------

inline json range_json(const Range& r) { return {real(r.lo), real(r.hi)}; }

inline Range get_range(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2) throw input_error(std::string("\"") + name + "\" must be a [lo, hi] pair");
  return {get_real(j[0]), get_real(j[1])};
}

inline void to_json(json& j, const FamilyConfig& f) {
  j = json{{"kind", to_string(f.kind)},
           {"n", f.n},
           {"log_amplitude", range_json(f.log_amplitude)},
           {"exponent_fraction", range_json(f.exponent_fraction)},
           {"log_radius", range_json(f.log_radius)},
           {"log_width", range_json(f.log_width)},
           {"evals_per_restart", f.evals_per_restart},
           {"search", f.search}};
}

inline void from_json(const json& j, FamilyConfig& f) {
  f.kind = family_from_string(field(j, "kind").get<std::string>());
  if (j.contains("n")) f.n = j.at("n").get<std::size_t>();
  if (j.contains("log_amplitude")) f.log_amplitude = get_range(j.at("log_amplitude"), "log_amplitude");
  if (j.contains("exponent_fraction")) f.exponent_fraction = get_range(j.at("exponent_fraction"), "exponent_fraction");
  if (j.contains("log_radius")) f.log_radius = get_range(j.at("log_radius"), "log_radius");
  if (j.contains("log_width")) f.log_width = get_range(j.at("log_width"), "log_width");
  if (j.contains("evals_per_restart")) f.evals_per_restart = j.at("evals_per_restart").get<std::size_t>();
  if (j.contains("search")) f.search = j.at("search").get<SearchConfig>();
}

inline void to_json(json& j, const SharpnessTrial& t) {
  j = json{{"trial", t.trial}, {"restart", t.restart}, {"params", reals(t.params)}, {"ratio", real(t.ratio)}};
}

inline void from_json(const json& j, SharpnessTrial& t) {
  t.trial = field(j, "trial").get<std::size_t>();
  t.restart = field(j, "restart").get<std::size_t>();
  t.params = get_reals(field(j, "params"));
  t.ratio = get_real(field(j, "ratio"));
}

inline void to_json(json& j, const SharpnessResult& r) {
  j = json{{"best_ratio", real(r.best_ratio)},
           {"best_params", reals(r.best_params)},
           {"best_functions", r.best_functions},
           {"trials", r.trials},
           {"c_new", real(r.c_new)},
           {"gap", real(r.gap)},
           {"history", r.history}};
}

inline void from_json(const json& j, SharpnessResult& r) {
  r.best_ratio = get_real(field(j, "best_ratio"));
  r.best_params = get_reals(field(j, "best_params"));
  r.best_functions = field(j, "best_functions").get<std::vector<std::string>>();
  r.trials = field(j, "trials").get<std::size_t>();
  r.c_new = get_real(field(j, "c_new"));
  r.gap = get_real(field(j, "gap"));
  r.history = field(j, "history").get<std::vector<SharpnessTrial>>();
}

}  // namespace weakmorrey
