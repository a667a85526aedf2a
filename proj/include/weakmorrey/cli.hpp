#pragma once

// Command-line front end. run() never throws: input problems exit 1, a failed
// inequality or an internal inconsistency exits 2.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weakmorrey/bounds.hpp"
#include "weakmorrey/error.hpp"
#include "weakmorrey/holder.hpp"
#include "weakmorrey/parse.hpp"
#include "weakmorrey/quasinorm.hpp"
#include "weakmorrey/serialize.hpp"
#include "weakmorrey/sharpness.hpp"

namespace weakmorrey::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitViolation = 2;

inline const char* const kDefinitionNote =
    "weak Morrey quasinorm: sup over balls B of |B|^(1/q - 1/p) * sup_gamma gamma * "
    "|{x in B : |f(x)| > gamma}|^(1/p). The level-set measure carries the exponent 1/p; "
    "the variant of the definition without it is not used.";

enum class Format { json, csv, text };

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Flattens nested JSON into (path, scalar text) pairs: a.b, a[0], ...
inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number()) {
    out.emplace_back(prefix, format_real(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? "true" : "false");
  } else {
    out.emplace_back(prefix, "");
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

inline void emit(std::ostream& os, const json& doc, Format fmt) {
  if (fmt == Format::json) {
    os << doc.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  if (fmt == Format::text) {
    for (const auto& [k, v] : rows) os << k << ": " << v << "\n";
    return;
  }
  std::vector<std::string> keys, values;
  for (const auto& [k, v] : rows) {
    keys.push_back(k);
    values.push_back(v);
  }
  write_csv_row(os, keys);
  write_csv_row(os, values);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void check_dimensions(const std::vector<FunctionExpr>& fs, std::size_t n) {
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (fs[i].dimension() != n)
      throw dimension_error("function " + std::to_string(i + 1) + " has dimension " +
                            std::to_string(fs[i].dimension()) + " but n = " + std::to_string(n));
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak Lebesgue / weak Morrey quasinorms and generalized Hölder checks", "weakmorrey"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "weakmorrey 0.1.0");

  std::string format_name = "json";
  std::string out_path;
  std::string config_path;
  std::uint64_t seed = 1;
  bool seed_given = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", out_path, "Write the report to this file instead of stdout");
    sub->add_option("--config", config_path, "Search configuration JSON");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          seed = s;
          seed_given = true;
        },
        "Seed for every stochastic step");
  };

  std::vector<double> p_list, a_list;
  double theta = 1.0;
  std::string fn_text, fns_text, system_path, family_path, history_path;
  std::size_t n = 0;
  double p = 0.0, q = 0.0, p1 = 0.0, p2 = 0.0, ball_radius = 0.0;
  std::vector<double> ball_center;
  std::size_t budget = 1000;

  auto* bounds_cmd = app.add_subcommand("bounds", "Compare the Hölder constants for a list of exponents");
  bounds_cmd->add_option("--p", p_list, "Exponents p_i")->required()->delimiter(',');
  add_common(bounds_cmd);

  auto* norm_cmd = app.add_subcommand("norm", "Weak Morrey norm, or weak Lebesgue norm on a given ball");
  norm_cmd->add_option("--fn", fn_text, "Function spec")->required();
  norm_cmd->add_option("--n", n, "Dimension")->required()->check(CLI::Range(std::size_t{1}, kMaxDimension));
  norm_cmd->add_option("--p", p, "Exponent p")->required();
  auto* q_opt = norm_cmd->add_option("--q", q, "Exponent q (weak Morrey)");
  auto* center_opt = norm_cmd->add_option("--ball-center", ball_center, "Ball center")->delimiter(',');
  auto* radius_opt = norm_cmd->add_option("--ball-radius", ball_radius, "Ball radius");
  center_opt->needs(radius_opt);
  radius_opt->needs(center_opt);
  q_opt->excludes(radius_opt);
  add_common(norm_cmd);

  auto* split_cmd = app.add_subcommand("split", "Optimal threshold split for the union bound");
  split_cmd->add_option("--a", a_list, "Per-factor constants a_i")->required()->delimiter(',');
  split_cmd->add_option("--p", p_list, "Exponents p_i")->required()->delimiter(',');
  split_cmd->add_option("--theta", theta, "Product threshold theta")->required();
  add_common(split_cmd);

  auto* holder_cmd = app.add_subcommand("holder", "Check the generalized Hölder inequality for a tuple");
  holder_cmd->add_option("--system", system_path, "Exponent system JSON")->required();
  holder_cmd->add_option("--fns", fns_text, "Function specs separated by ';'")->required();
  add_common(holder_cmd);

  auto* incl_cmd = app.add_subcommand("inclusion", "Check the inclusion wM^{p2}_q into wM^{p1}_q for one function");
  incl_cmd->add_option("--fn", fn_text, "Function spec")->required();
  incl_cmd->add_option("--n", n, "Dimension")->required()->check(CLI::Range(std::size_t{1}, kMaxDimension));
  incl_cmd->add_option("--p1", p1, "Smaller exponent")->required();
  incl_cmd->add_option("--p2", p2, "Larger exponent")->required();
  incl_cmd->add_option("--q", q, "Morrey exponent q")->required();
  add_common(incl_cmd);

  auto* sharp_cmd = app.add_subcommand("sharpness", "Search a function family for large Hölder ratios");
  sharp_cmd->add_option("--system", system_path, "Exponent system JSON")->required();
  sharp_cmd->add_option("--family", family_path, "Family configuration JSON")->required();
  sharp_cmd->add_option("--budget", budget, "Number of ratio evaluations")->check(CLI::PositiveNumber);
  sharp_cmd->add_option("--history", history_path, "Write every trial as CSV (trial, ratio, params...)");
  add_common(sharp_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  const Format fmt = format_name == "csv" ? Format::csv : format_name == "text" ? Format::text : Format::json;
  json doc;
  int code = kExitOk;
  try {
    SearchConfig cfg;
    if (!config_path.empty()) cfg = read_json_file(config_path).get<SearchConfig>();
    if (seed_given) cfg.seed = seed;

    if (*bounds_cmd) {
      doc = {{"command", "bounds"}, {"inputs", {{"p", reals(p_list)}}}, {"report", bound_comparison(p_list)}};
    } else if (*norm_cmd) {
      const auto f = parse_function(fn_text);
      check_dimensions({f}, n);
      json inputs = {{"fn", to_spec(f)}, {"n", n}, {"p", real(p)}};
      if (*radius_opt) {
        const Ball ball(ball_center, ball_radius);
        if (ball.dimension() != n) throw dimension_error("ball center has the wrong dimension");
        inputs["ball"] = ball;
        doc = {{"command", "norm"}, {"kind", "weak_lebesgue"}, {"inputs", inputs},
               {"report", weak_lebesgue_norm(f, ball, p, cfg)}};
      } else {
        if (!*q_opt) throw input_error("norm: --q is required unless --ball-center/--ball-radius are given");
        inputs["q"] = real(q);
        doc = {{"command", "norm"}, {"kind", "weak_morrey"}, {"inputs", inputs},
               {"report", weak_morrey_norm(f, p, q, cfg)}};
      }
    } else if (*split_cmd) {
      doc = {{"command", "split"}, {"report", optimal_split(a_list, p_list, theta)}};
    } else if (*holder_cmd) {
      std::size_t dim = 0;
      const auto sys = system_from_json(read_json_file(system_path), &dim);
      const auto fs = parse_function_list(fns_text);
      check_dimensions(fs, dim);
      std::vector<std::string> specs;
      for (const auto& f : fs) specs.push_back(to_spec(f));
      const auto rep = check_holder(fs, sys, cfg);
      doc = {{"command", "holder"}, {"inputs", {{"system", system_to_json(sys, dim)}, {"fns", specs}}},
             {"report", rep}};
      if (!rep.verdict || !rep.pstar_verdict || !rep.inclusion_holds) code = kExitViolation;
    } else if (*incl_cmd) {
      const auto f = parse_function(fn_text);
      check_dimensions({f}, n);
      const auto rep = check_inclusion(f, p1, p2, q, cfg);
      doc = {{"command", "inclusion"}, {"inputs", {{"fn", to_spec(f)}, {"n", n}}}, {"report", rep}};
      if (!rep.verdict) code = kExitViolation;
    } else if (*sharp_cmd) {
      std::size_t dim = 0;
      const auto sys = system_from_json(read_json_file(system_path), &dim);
      const json fam_json = read_json_file(family_path);
      auto fam = fam_json.get<FamilyConfig>();
      if (!fam_json.contains("n")) fam.n = dim;
      if (fam.n != dim) throw dimension_error("family n differs from the system's n");
      if (!config_path.empty()) fam.search = cfg;
      if (seed_given) fam.search.seed = seed;
      const auto res = search_extremal(sys, fam, budget, seed);
      if (!history_path.empty()) {
        std::ofstream h(history_path, std::ios::binary);
        if (!h) throw input_error("cannot write '" + history_path + "'");
        std::vector<std::string> header{"trial", "ratio"};
        for (const auto& name : parameter_names(fam, sys.m())) header.push_back(name);
        write_csv_row(h, header);
        for (const auto& t : res.history) {
          std::vector<std::string> row{std::to_string(t.trial), format_real(t.ratio)};
          for (double x : t.params) row.push_back(format_real(x));
          write_csv_row(h, row);
        }
      }
      doc = {{"command", "sharpness"},
             {"inputs", {{"system", system_to_json(sys, dim)}, {"family", fam}, {"budget", budget}, {"seed", seed}}},
             {"report", res}};
    }
  } catch (const inconsistency_error& e) {
    err << "inconsistency: " << e.what() << "\n";
    return kExitViolation;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  doc["notes"] = kDefinitionNote;

  if (out_path.empty()) {
    emit(out, doc, fmt);
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitInput;
    }
    emit(file, doc, fmt);
  }
  return code;
}

}  // namespace weakmorrey::cli
