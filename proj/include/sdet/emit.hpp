#pragma once

// Serialization of sdet values: canonical text (with a parser), JSON,
// LaTeX bracket tables, and golden-file comparison.
//
// Text grammar (whitespace and newlines are insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 'u' | symbol | '(' expr ')'
//   symbol  := 'b[' integer ',' integer '](u' ('-' integer)? ')'
//
// Products keep their left-to-right order; division is only by scalars.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sdet/errors.hpp"
#include "sdet/freealg.hpp"
#include "sdet/scalars.hpp"
#include "sdet/sdetcore.hpp"

namespace sdet {

// One term per line: "coeff * b[p,q](u) * b[p,q](u-1) ...", lines after the
// first prefixed with "+ ". The zero element is "0".
inline std::string to_text(const AlgElem& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : s.terms()) {
    if (!out.empty()) out += "\n+ ";
    out += c.to_string();
    if (!w.empty()) out += " * " + to_string(w);
  }
  return out;
}

namespace detail {

class TextParser {
 public:
  explicit TextParser(std::string_view src) : s_(src) {}

  AlgElem parse_all() {
    AlgElem v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Integer integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    return Integer(std::string(s_.substr(start, i_ - start)));
  }
  int small_int() {
    const std::size_t at = i_;
    Integer v = integer();
    if (!v.fits_sint_p() || v > 1000) {
      i_ = at;
      fail("index too large");
    }
    return static_cast<int>(v.get_si());
  }

  AlgElem expr() {
    AlgElem v = term();
    for (;;) {
      if (accept('+'))
        v += term();
      else if (accept('-'))
        v -= term();
      else
        return v;
    }
  }

  AlgElem term() {
    AlgElem v = unary();
    for (;;) {
      if (accept('*')) {
        v = v * unary();
      } else if (peek('/')) {
        const std::size_t at = i_;
        ++i_;
        AlgElem d = unary();
        if (!d.is_scalar() || d.is_zero()) {
          i_ = at;
          fail("division by a non-scalar or zero");
        }
        v = v * d.scalar_part().inverse();
      } else {
        return v;
      }
    }
  }

  AlgElem unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  AlgElem power() {
    AlgElem base = primary();
    if (!accept('^')) return base;
    const int k = small_int();
    AlgElem r(1);
    for (int j = 0; j < k; ++j) r = r * base;
    return r;
  }

  AlgElem primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) return AlgElem(RatFunc(Rational(integer())));
    if (c == '(') {
      ++i_;
      AlgElem v = expr();
      expect(')');
      return v;
    }
    if (c == 'u') {
      ++i_;
      return AlgElem(RatFunc::u());
    }
    if (c == 'b') {
      ++i_;
      expect('[');
      const int p = small_int();
      expect(',');
      const int q = small_int();
      expect(']');
      expect('(');
      expect('u');
      int shift = 0;
      if (accept('-')) shift = small_int();
      expect(')');
      if (p < 1 || q < 1) fail("generator indices are 1-based");
      return AlgElem::generator(p, q, shift);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline AlgElem from_text(std::string_view s) { return detail::TextParser(s).parse_all(); }

// ---------------------------------------------------------------------------
// JSON: {"n": 2, "path": "thm", "terms": [{"coeff": {"num": [...], "den": [...]},
// "word": [[p, q, s], ...]}, ...]}. Coefficient lists run by ascending degree
// and hold decimal strings.

inline nlohmann::json to_json_value(const SdetResult& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : r.value.terms()) {
    auto [num, den] = c.integer_parts();
    auto ints = [](const UPoly& p) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& x : p.coeffs()) a.push_back(x.get_num().get_str());
      if (a.empty()) a.push_back("0");
      return a;
    };
    nlohmann::json word = nlohmann::json::array();
    for (const auto& g : w) word.push_back({g.p, g.q, g.shift});
    terms.push_back({{"coeff", {{"num", ints(num)}, {"den", ints(den)}}}, {"word", word}});
  }
  return {{"n", r.n}, {"path", std::string(path_name(r.path))}, {"terms", terms}};
}

inline std::string to_json(const SdetResult& r) { return to_json_value(r).dump(2) + "\n"; }

inline SdetResult from_json(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw SchemaError(what);
  };
  require(j.is_object(), "top level must be an object");
  require(j.contains("n") && j["n"].is_number_integer(), "missing integer field 'n'");
  require(j.contains("path") && j["path"].is_string(), "missing string field 'path'");
  require(j.contains("terms") && j["terms"].is_array(), "missing array field 'terms'");
  SdetResult r;
  r.n = j["n"].get<int>();
  require(r.n >= 1, "'n' must be positive");
  auto path = parse_path(j["path"].get<std::string>());
  require(path.has_value(), "unknown path '" + j["path"].get<std::string>() + "'");
  r.path = *path;
  auto poly = [&](const nlohmann::json& a, const char* name) {
    require(a.is_array() && !a.empty(), std::string("coefficient list '") + name + "' must be a non-empty array");
    std::vector<Rational> cs;
    for (const auto& x : a) {
      require(x.is_string(), "coefficients must be decimal strings");
      Integer v;
      require(v.set_str(x.get<std::string>(), 10) == 0, "malformed integer '" + x.get<std::string>() + "'");
      cs.emplace_back(v);
    }
    return UPoly(std::move(cs));
  };
  for (const auto& t : j["terms"]) {
    require(t.is_object() && t.contains("coeff") && t.contains("word"), "term needs 'coeff' and 'word'");
    const auto& c = t["coeff"];
    require(c.is_object() && c.contains("num") && c.contains("den"), "coeff needs 'num' and 'den'");
    UPoly den = poly(c["den"], "den");
    require(!den.is_zero(), "zero denominator");
    RatFunc coeff(poly(c["num"], "num"), std::move(den));
    require(t["word"].is_array(), "word must be an array");
    Word w;
    for (const auto& g : t["word"]) {
      require(g.is_array() && g.size() == 3 && g[0].is_number_integer() && g[1].is_number_integer() &&
                  g[2].is_number_integer(),
              "word entries must be [p, q, s] integer triples");
      GenSym sym{g[0].get<int>(), g[1].get<int>(), g[2].get<int>()};
      require(sym.p >= 1 && sym.p <= r.n && sym.q >= 1 && sym.q <= r.n && sym.shift >= 0,
              "generator index out of range");
      w.push_back(sym);
    }
    r.value.add_term(w, coeff);
  }
  return r;
}

// ---------------------------------------------------------------------------
// LaTeX.

namespace detail {

inline std::string latex_poly(const UPoly& p) {
  std::string s = p.to_string();
  std::string out;
  for (char c : s)
    if (c != '*') out += c;
  return out;
}

inline std::string latex_word(const Word& w) {
  std::string upper, lower;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) {
      upper += "&";
      lower += "&";
    }
    upper += std::to_string(w[k].q);
    lower += std::to_string(w[k].p);
  }
  return "\\left|\\begin{matrix}" + upper + "\\\\" + lower + "\\end{matrix}\\right|";
}

}  // namespace detail

// Bracket-array form: each word b^{k}_{p}(u) b^{l}_{r}(u-1) ... is rendered
// with column indices on the upper row and row indices on the lower row.
// Terms sharing a coefficient are grouped in order of first appearance.
inline std::string to_latex(const AlgElem& s, int n) {
  if (!has_sdet_word_shape(s, n)) throw RangeError("word-shape violation: words must have shifts 0..n-1");
  if (s.is_zero()) return "0";
  std::vector<std::pair<RatFunc, std::vector<Word>>> groups;
  for (const auto& [w, c] : s.terms()) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == c; });
    if (it == groups.end())
      groups.push_back({c, {w}});
    else
      it->second.push_back(w);
  }
  std::string out;
  for (const auto& [c, words] : groups) {
    auto [num, den] = c.integer_parts();
    const bool negative = num.lead() < 0;
    if (negative) num = -num;
    const bool unit = den.degree() == 0 && den.lead() == 1 && num.degree() == 0 && num.lead() == 1;
    std::string body;
    if (unit) {
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) body += negative ? " - " : " + ";
        body += detail::latex_word(words[i]);
      }
      out += (out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ")) + body;
      continue;
    }
    std::string coeff = den.degree() == 0 && den.lead() == 1
                            ? detail::latex_poly(num)
                            : "\\frac{" + detail::latex_poly(num) + "}{" + detail::latex_poly(den) + "}";
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) body += " + ";
      body += detail::latex_word(words[i]);
    }
    if (words.size() > 1) body = "\\left(" + body + "\\right)";
    out += (out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ")) + coeff + body;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Golden files: '#' comment lines, a header line "n = <int>", then an
// expression in the text grammar.

struct GoldenFile {
  int n = 0;
  AlgElem value;
};

inline GoldenFile parse_golden(std::string_view text) {
  std::string body;
  std::istringstream in{std::string(text)};
  std::string line;
  GoldenFile g;
  bool have_n = false;
  while (std::getline(in, line)) {
    std::string_view v(line);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    if (v.empty() || v.front() == '#') continue;
    if (!have_n) {
      if (v.substr(0, 1) != "n") throw GoldenError("golden file must start with 'n = <int>'");
      auto eq = v.find('=');
      if (eq == std::string_view::npos) throw GoldenError("malformed 'n' header");
      try {
        g.n = std::stoi(std::string(v.substr(eq + 1)));
      } catch (const std::exception&) {
        throw GoldenError("malformed 'n' header");
      }
      have_n = true;
      continue;
    }
    body += line;
    body += "\n";
  }
  if (!have_n || g.n < 1) throw GoldenError("golden file lacks a valid 'n' header");
  try {
    g.value = from_text(body);
  } catch (const ParseError& e) {
    throw GoldenError(std::string("corrupt golden body: ") + e.what());
  }
  return g;
}

inline GoldenFile read_golden(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw GoldenError("cannot open golden file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_golden(ss.str());
}

inline std::string to_golden(int n, const AlgElem& s, const std::string& header = "") {
  std::string out;
  std::istringstream hs(header);
  std::string line;
  while (std::getline(hs, line)) out += "# " + line + "\n";
  out += "n = " + std::to_string(n) + "\n";
  return out + to_text(s) + "\n";
}

struct GoldenReport {
  bool match = false;
  std::string detail;
};

inline GoldenReport golden_compare(const AlgElem& s, int n, const std::filesystem::path& file) {
  const GoldenFile g = read_golden(file);
  if (g.n != n) return {false, "golden is for n=" + std::to_string(g.n) + ", computed n=" + std::to_string(n)};
  if (g.value == s) return {true, ""};
  std::map<Word, std::pair<RatFunc, RatFunc>> all;
  for (const auto& [w, c] : s.terms()) all[w].first = c;
  for (const auto& [w, c] : g.value.terms()) all[w].second = c;
  for (const auto& [w, cc] : all)
    if (!(cc.first == cc.second))
      return {false, "first difference at " + (w.empty() ? std::string("1") : to_string(w)) +
                         ": computed " + cc.first.to_string() + ", golden " + cc.second.to_string()};
  return {false, "mismatch"};
}

}  // namespace sdet
