#pragma once

// Free noncommutative algebra over RatFunc on the symbols b_p^q(u-s), and
// its expansion into the mode generators b_pq^(r) at u = infinity.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sdet/errors.hpp"
#include "sdet/scalars.hpp"

namespace sdet {

// b_p^q(u - shift): p is the row index, q the column index, both 1-based.
struct GenSym {
  int p = 1;
  int q = 1;
  int shift = 0;

  friend auto operator<=>(const GenSym&, const GenSym&) = default;
};

// Noncommutative monomial; the empty word is the unit.
using Word = std::vector<GenSym>;

inline std::string to_string(const GenSym& g) {
  std::string s = "b[" + std::to_string(g.p) + "," + std::to_string(g.q) + "](u";
  if (g.shift != 0) s += (g.shift > 0 ? "-" : "+") + std::to_string(g.shift > 0 ? g.shift : -g.shift);
  return s + ")";
}

inline std::string to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " * ";
    s += to_string(w[i]);
  }
  return s;
}

inline Word concat(const Word& a, const Word& b) {
  Word w;
  w.reserve(a.size() + b.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

// Finite sum of words with nonzero RatFunc coefficients. Iteration follows
// the lexicographic order on (p, q, shift) triples, so equal elements have
// identical representations and identical emitted text.
class AlgElem {
 public:
  using TermMap = std::map<Word, RatFunc>;

  AlgElem() = default;
  AlgElem(const RatFunc& c) {  // NOLINT
    if (!c.is_zero()) terms_.emplace(Word{}, c);
  }
  AlgElem(long c) : AlgElem(RatFunc(c)) {}  // NOLINT

  static AlgElem generator(int p, int q, int shift) {
    AlgElem e;
    e.terms_.emplace(Word{GenSym{p, q, shift}}, RatFunc(1));
    return e;
  }
  static AlgElem monomial(Word w, RatFunc c = RatFunc(1)) {
    AlgElem e;
    e.add_term(std::move(w), c);
    return e;
  }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_scalar() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  // Coefficient of the empty word.
  RatFunc scalar_part() const {
    auto it = terms_.find(Word{});
    return it == terms_.end() ? RatFunc() : it->second;
  }
  RatFunc coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? RatFunc() : it->second;
  }

  void add_term(const Word& w, const RatFunc& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void add_term(Word&& w, RatFunc&& c) {
    if (c.is_zero()) return;
    auto it = terms_.lower_bound(w);
    if (it != terms_.end() && it->first == w) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    } else {
      terms_.emplace_hint(it, std::move(w), std::move(c));
    }
  }

  AlgElem operator-() const {
    AlgElem r = *this;
    for (auto& [w, c] : r.terms_) c = -c;
    return r;
  }
  AlgElem& operator+=(const AlgElem& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  AlgElem& operator-=(const AlgElem& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  AlgElem& operator*=(const RatFunc& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    if (s.is_one()) return *this;
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  // this += a * b, without materializing the product.
  void add_product(const AlgElem& a, const AlgElem& b) {
    if (a.is_zero() || b.is_zero()) return;
    if (a.is_scalar() || b.is_scalar()) {
      const bool left = a.is_scalar();
      const RatFunc& s = (left ? a : b).terms_.begin()->second;
      const bool unit = s.is_one();
      for (const auto& [w, c] : (left ? b : a).terms_) {
        if (unit)
          add_term(w, c);
        else
          add_term(Word(w), left ? s * c : c * s);
      }
      return;
    }
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) {
        if (cb.is_one())
          add_term(concat(wa, wb), RatFunc(ca));
        else if (ca.is_one())
          add_term(concat(wa, wb), RatFunc(cb));
        else
          add_term(concat(wa, wb), ca * cb);
      }
  }

  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  friend AlgElem operator*(const AlgElem& a, const AlgElem& b) {
    AlgElem r;
    r.add_product(a, b);
    return r;
  }
  friend AlgElem operator*(AlgElem a, const RatFunc& s) { return a *= s; }
  friend AlgElem operator*(const RatFunc& s, AlgElem a) { return a *= s; }
  friend bool operator==(const AlgElem& a, const AlgElem& b) { return a.terms_ == b.terms_; }

 private:
  TermMap terms_;
};

inline AlgElem alg_scale(const AlgElem& a, const RatFunc& c) { return a * c; }

// Debug rendering; emit::to_text is the canonical serialization.
inline std::ostream& operator<<(std::ostream& os, const AlgElem& a) {
  if (a.is_zero()) return os << "0";
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    if (!w.empty()) os << " * " << to_string(w);
  }
  return os;
}

// ---------------------------------------------------------------------------
// Mode expansion.

// b_pq^(r)
struct SeriesGen {
  int p = 1;
  int q = 1;
  int r = 0;

  friend auto operator<=>(const SeriesGen&, const SeriesGen&) = default;
};

using SeriesWord = std::vector<SeriesGen>;
using SeriesCoeff = std::map<SeriesWord, Rational>;

inline std::string to_string(const SeriesGen& g) {
  return "b[" + std::to_string(g.p) + "," + std::to_string(g.q) + "]^(" + std::to_string(g.r) + ")";
}

inline std::string to_string(const SeriesWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " * ";
    s += to_string(w[i]);
  }
  return s;
}

inline void add_to(SeriesCoeff& m, const SeriesWord& w, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = m.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) m.erase(it);
  }
}

// Truncated series sum_{r=0}^{order} C_r t^r, t = 1/u, where each C_r is a
// noncommutative polynomial in the modes with rational coefficients.
class SeriesElem {
 public:
  explicit SeriesElem(int order) : c_(static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw RangeError("negative truncation order");
  }

  static SeriesElem scalar(const TruncSeries& s, int order) {
    SeriesElem e(order);
    for (int r = 0; r <= order && r <= s.order(); ++r) add_to(e.c_[r], SeriesWord{}, s.coeffs[r]);
    return e;
  }

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const SeriesCoeff& coeff(int r) const { return c_.at(static_cast<std::size_t>(r)); }
  SeriesCoeff& coeff(int r) { return c_.at(static_cast<std::size_t>(r)); }

  SeriesElem& operator+=(const SeriesElem& o) {
    check_order(o);
    for (int r = 0; r <= order(); ++r)
      for (const auto& [w, c] : o.c_[r]) add_to(c_[r], w, c);
    return *this;
  }
  friend SeriesElem operator+(SeriesElem a, const SeriesElem& b) { return a += b; }

  // Product truncated at the common order; word order is preserved.
  friend SeriesElem operator*(const SeriesElem& a, const SeriesElem& b) {
    a.check_order(b);
    SeriesElem r(a.order());
    for (int i = 0; i <= a.order(); ++i)
      for (int j = 0; i + j <= a.order(); ++j)
        for (const auto& [wa, ca] : a.c_[i])
          for (const auto& [wb, cb] : b.c_[j]) {
            SeriesWord w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            add_to(r.c_[i + j], w, ca * cb);
          }
    return r;
  }
  friend bool operator==(const SeriesElem& a, const SeriesElem& b) { return a.c_ == b.c_; }

 private:
  void check_order(const SeriesElem& o) const {
    if (o.order() != order()) throw RangeError("series truncation orders differ");
  }

  std::vector<SeriesCoeff> c_;
};

// b_p^q(u-s) = sum_r b_pq^(r) (u-s)^(-r), with
// (u-s)^(-r) = t^r (1-st)^(-r) = sum_j C(r+j-1, j) s^j t^(r+j).
inline SeriesElem symbol_series(const GenSym& g, int order) {
  SeriesElem e(order);
  add_to(e.coeff(0), SeriesWord{SeriesGen{g.p, g.q, 0}}, Rational(1));
  for (int d = 1; d <= order; ++d)
    for (int r = 1; r <= d; ++r) {
      const int j = d - r;
      Integer sj;
      mpz_pow_ui(sj.get_mpz_t(), Integer(g.shift).get_mpz_t(), static_cast<unsigned long>(j));
      Rational w(binomial(static_cast<unsigned long>(d - 1), static_cast<unsigned long>(j)) * sj);
      add_to(e.coeff(d), SeriesWord{SeriesGen{g.p, g.q, r}}, w);
    }
  return e;
}

inline SeriesElem expand_series(const AlgElem& a, int n, int order) {
  SeriesElem total(order);
  for (const auto& [w, c] : a.terms()) {
    SeriesElem term = SeriesElem::scalar(rf_expand_at_infinity(c, order), order);
    for (const GenSym& g : w) {
      if (g.p < 1 || g.p > n || g.q < 1 || g.q > n)
        throw RangeError("generator index outside 1.." + std::to_string(n));
      term = term * symbol_series(g, order);
    }
    total += term;
  }
  return total;
}

// Evaluates a mode polynomial under a substitution of each generator by a
// rational number.
inline Rational evaluate_modes(const SeriesCoeff& c, const std::function<Rational(const SeriesGen&)>& value) {
  Rational acc(0);
  for (const auto& [w, k] : c) {
    Rational t = k;
    for (const auto& g : w) {
      t *= value(g);
      if (t == 0) break;
    }
    acc += t;
  }
  return acc;
}

}  // namespace sdet
