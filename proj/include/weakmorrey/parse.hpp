#pragma once

// Text form of FunctionExpr, one expression per string:
//
//   power:c=<real>,alpha=<real>,center=<comma-list>
//   indicator:c=<real>,center=<comma-list>,radius=<real>
//   step:center=<comma-list>,breaks=<list>,values=<list>
//   product:[<spec>;<spec>;...]
//
// Whitespace is ignored. `breaks` lists the outer radius of each annulus;
// a leading 0 is accepted when it makes breaks one longer than values.

#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "weakmorrey/error.hpp"
#include "weakmorrey/functions.hpp"

namespace weakmorrey {

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  FunctionExpr parse_all() {
    FunctionExpr f = parse_spec();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return f;
  }

  std::vector<FunctionExpr> parse_list_all() {
    std::vector<FunctionExpr> out;
    out.push_back(parse_spec());
    while (accept(';')) out.push_back(parse_spec());
    skip_ws();
    if (pos_ != text_.size()) fail("';' or end of input");
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string found() const {
    if (pos_ >= text_.size()) return "end of input";
    return std::string("'") + text_[pos_] + "'";
  }

  [[noreturn]] void fail(const std::string& expected) const { throw parse_error(pos_, expected, found()); }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  bool peek_ident() {
    skip_ws();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (pos_ < text_.size() && text_[pos_] == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  // Numbers separated by commas; stops before ",<ident>=".
  std::vector<double> number_list() {
    std::vector<double> out{number()};
    for (;;) {
      const std::size_t save = pos_;
      if (!accept(',')) break;
      if (peek_ident()) {
        pos_ = save;
        break;
      }
      out.push_back(number());
    }
    return out;
  }

  using Fields = std::map<std::string, std::pair<std::size_t, std::vector<double>>>;

  Fields fields(const std::vector<std::string>& allowed) {
    Fields out;
    do {
      skip_ws();
      const std::size_t at = pos_;
      std::string key = ident();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        pos_ = at;
        std::string expected = "one of";
        for (const auto& a : allowed) expected += " '" + a + "'";
        fail(expected);
      }
      if (out.count(key)) {
        pos_ = at;
        fail("a key not already given");
      }
      expect('=');
      out[key] = {at, number_list()};
    } while (accept(','));
    for (const auto& a : allowed)
      if (!out.count(a)) fail("key '" + a + "'");
    return out;
  }

  double scalar(const Fields& f, const std::string& key) {
    const auto& [at, values] = f.at(key);
    if (values.size() != 1) throw parse_error(at, "a single number for '" + key + "'", "a list");
    return values.front();
  }

  template <class Build>
  FunctionExpr build(std::size_t at, Build&& b) {
    try {
      return b();
    } catch (const parse_error&) {
      throw;
    } catch (const input_error& e) {
      throw parse_error(at, "a valid function", e.what());
    }
  }

  FunctionExpr parse_spec() {
    skip_ws();
    const std::size_t at = pos_;
    const std::string kind = ident();
    expect(':');
    if (kind == "power") {
      auto f = fields({"c", "alpha", "center"});
      return build(at, [&] { return power(scalar(f, "c"), scalar(f, "alpha"), f["center"].second); });
    }
    if (kind == "indicator") {
      auto f = fields({"c", "center", "radius"});
      return build(at, [&] { return indicator(scalar(f, "c"), Ball(f["center"].second, scalar(f, "radius"))); });
    }
    if (kind == "step") {
      auto f = fields({"center", "breaks", "values"});
      auto breaks = f["breaks"].second;
      const auto& values = f["values"].second;
      if (breaks.size() == values.size() + 1 && breaks.front() == 0.0) breaks.erase(breaks.begin());
      return build(at, [&] { return step(f["center"].second, breaks, values); });
    }
    if (kind == "product") {
      expect('[');
      std::vector<FunctionExpr> factors{parse_spec()};
      while (accept(';')) factors.push_back(parse_spec());
      expect(']');
      return build(at, [&] { return product(std::move(factors)); });
    }
    pos_ = at;
    fail("'power', 'indicator', 'step' or 'product'");
  }
};

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

}  // namespace detail

inline FunctionExpr parse_function(std::string_view text) { return detail::SpecParser(text).parse_all(); }

// Semicolon-separated list of specs at the top level.
inline std::vector<FunctionExpr> parse_function_list(std::string_view text) {
  return detail::SpecParser(text).parse_list_all();
}

inline std::string to_spec(const FunctionExpr& f) {
  using detail::format_list;
  using detail::format_number;
  struct Visitor {
    std::string operator()(const RadialPower& p) const {
      return "power:c=" + format_number(p.c) + ",alpha=" + format_number(p.alpha) + ",center=" + format_list(p.center);
    }
    std::string operator()(const BallIndicator& b) const {
      return "indicator:c=" + format_number(b.c) + ",center=" + format_list(b.support.center()) +
             ",radius=" + format_number(b.support.radius());
    }
    std::string operator()(const RadialStep& s) const {
      return "step:center=" + format_list(s.center) + ",breaks=" + format_list(s.breaks) +
             ",values=" + format_list(s.values);
    }
    std::string operator()(const Product& p) const {
      std::string out = "product:[";
      for (std::size_t i = 0; i < p.factors.size(); ++i) {
        if (i) out += ';';
        out += to_spec(p.factors[i]);
      }
      return out + "]";
    }
  };
  return std::visit(Visitor{}, f.node());
}

}  // namespace weakmorrey
