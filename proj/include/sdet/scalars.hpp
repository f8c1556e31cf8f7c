#pragma once

// Exact scalars: rationals, polynomials in u over Q, and rational functions
// of u in a canonical form, plus expansion in t = 1/u at u = infinity.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sdet/errors.hpp"

namespace sdet {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Dense polynomial in u with rational coefficients. coeffs()[k] is the
// coefficient of u^k; trailing zeros are never stored.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  UPoly(std::initializer_list<long> coeffs) {
    for (long x : coeffs) c_.emplace_back(x);
    trim();
  }

  static UPoly constant(const Rational& c) { return UPoly(std::vector<Rational>{c}); }
  static UPoly u() { return UPoly(std::vector<Rational>{Rational(0), Rational(1)}); }
  // a*u + b
  static UPoly linear(const Rational& a, const Rational& b) {
    return UPoly(std::vector<Rational>{b, a});
  }

  bool is_zero() const noexcept { return c_.empty(); }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  Rational coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Rational(0);
  }
  const Rational& lead() const { return c_.back(); }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UPoly operator-() const {
    UPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  UPoly& operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  UPoly& operator-=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  UPoly& operator*=(const Rational& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(UPoly a, const Rational& s) { return a *= s; }
  friend UPoly operator*(const Rational& s, UPoly a) { return a *= s; }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(r));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  // Euclidean division a = q*b + r with deg r < deg b.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (a.degree() < b.degree()) return {UPoly{}, a};
    std::vector<Rational> rem = a.c_;
    std::vector<Rational> quo(a.c_.size() - b.c_.size() + 1);
    const Rational& lb = b.lead();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      Rational f = rem[k + b.degree()] / lb;
      quo[k] = f;
      if (f == 0) continue;
      for (int j = 0; j <= b.degree(); ++j) rem[k + j] -= f * b.c_[j];
    }
    rem.resize(b.c_.size() - 1);
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    return *this * Rational(1 / lead());
  }

  // Monic gcd; gcd(0, 0) = 0.
  friend UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      UPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  // Human-readable form, e.g. "2*u-1"; rational coefficients print as p/q.
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (int k = degree(); k >= 0; --k) {
      const Rational& c = c_[k];
      if (c == 0) continue;
      Rational mag = abs(c);
      if (c < 0)
        s += "-";
      else if (!s.empty())
        s += "+";
      if (k == 0) {
        s += mag.get_str();
      } else {
        if (mag != 1) s += mag.get_str() + "*";
        s += "u";
        if (k > 1) s += "^" + std::to_string(k);
      }
    }
    return s;
  }

  std::size_t term_count() const {
    return static_cast<std::size_t>(
        std::count_if(c_.begin(), c_.end(), [](const Rational& x) { return x != 0; }));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

// Truncated power series sum_{r=0}^{order} c_r t^r in t = 1/u.
struct TruncSeries {
  std::vector<Rational> coeffs;

  int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  friend bool operator==(const TruncSeries&, const TruncSeries&) = default;
};

namespace detail {

// Canonical num/den pair; see RatFunc.
struct RatRep {
  UPoly num;
  UPoly den;
};

// gcd(num, den) = 1; den primitive over Z with positive leading coefficient.
inline void canonicalize(UPoly& num, UPoly& den, bool reduce) {
  if (num.is_zero()) {
    den = UPoly::constant(1);
    return;
  }
  if (reduce && den.degree() > 0) {
    UPoly g = gcd(num, den);
    if (g.degree() > 0) {
      num = UPoly::divmod(num, g).first;
      den = UPoly::divmod(den, g).first;
    }
  }
  Integer l = 1;
  for (const auto& c : den.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  Integer g = 0;
  for (const auto& c : den.coeffs()) {
    Integer v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Rational s(l, g);
  s.canonicalize();
  if (den.lead() < 0) s = -s;
  if (s != 1) {
    den *= s;
    num *= s;
  }
}

inline RatRep add_canonical(const RatRep& x, const RatRep& y) {
  if (x.den == y.den) {
    RatRep r{x.num + y.num, x.den};
    canonicalize(r.num, r.den, !r.den.is_constant());
    return r;
  }
  // gcd(n + p*d, d) = gcd(n, d): adding a polynomial keeps the form reduced.
  if (y.den.is_constant()) return {x.num + y.num * x.den, x.den};
  if (x.den.is_constant()) return {x.num * y.den + y.num, y.den};
  const UPoly g = gcd(x.den, y.den);
  if (g.degree() == 0) {
    // Coprime primitive denominators: the product is primitive (Gauss) and
    // the sum is already reduced.
    return {x.num * y.den + y.num * x.den, x.den * y.den};
  }
  const UPoly a = UPoly::divmod(x.den, g).first;
  const UPoly b = UPoly::divmod(y.den, g).first;
  RatRep r{x.num * b + y.num * a, x.den * b};
  canonicalize(r.num, r.den, true);
  return r;
}

inline RatRep mul_canonical(const RatRep& x, const RatRep& y) {
  if (y.den.is_constant() && y.num.is_constant()) {
    RatRep r = x;
    if (y.num.is_zero()) return {UPoly{}, UPoly::constant(1)};
    r.num *= y.num.lead();
    return r;
  }
  if (x.den.is_constant() && x.num.is_constant()) return mul_canonical(y, x);
  // Cross-cancel so each side stays reduced.
  auto cancel = [](const UPoly& p, const UPoly& g) {
    return g.degree() > 0 ? UPoly::divmod(p, g).first : p;
  };
  const UPoly g1 = gcd(x.num, y.den);
  const UPoly g2 = gcd(y.num, x.den);
  RatRep r{cancel(x.num, g1) * cancel(y.num, g2), cancel(x.den, g2) * cancel(y.den, g1)};
  canonicalize(r.num, r.den, false);
  return r;
}

// Hash-consing table: every distinct canonical value is stored once, and
// sums and products of stored values are memoized. Entries live for the
// whole process; access is serialized by a mutex.
class RatTable {
 public:
  static RatTable& instance() {
    static RatTable table;
    return table;
  }

  const RatRep* intern(RatRep&& r) {
    std::lock_guard<std::mutex> lock(mu_);
    return intern_locked(std::move(r));
  }

  template <class Fn>
  const RatRep* binary(int op, const RatRep* a, const RatRep* b, Fn compute) {
    const Key key{op, a, b};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    RatRep r = compute(*a, *b);
    std::lock_guard<std::mutex> lock(mu_);
    const RatRep* out = intern_locked(std::move(r));
    memo_.emplace(key, out);
    return out;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return values_.size();
  }

 private:
  struct Key {
    int op;
    const RatRep* a;
    const RatRep* b;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<const void*>()(k.a);
      h ^= std::hash<const void*>()(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h ^ static_cast<std::size_t>(k.op);
    }
  };

  static std::string fingerprint(const RatRep& r) {
    std::string s;
    for (const auto& c : r.num.coeffs()) s += c.get_str() + ",";
    s += "|";
    for (const auto& c : r.den.coeffs()) s += c.get_str() + ",";
    return s;
  }

  const RatRep* intern_locked(RatRep&& r) {
    std::string key = fingerprint(r);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second.get();
    auto owned = std::make_unique<RatRep>(std::move(r));
    const RatRep* p = owned.get();
    values_.emplace(std::move(key), std::move(owned));
    return p;
  }

  mutable std::mutex mu_;
  std::unordered_map<std::string, std::unique_ptr<RatRep>> values_;
  std::unordered_map<Key, const RatRep*, KeyHash> memo_;
};

}  // namespace detail

// Rational function num/den in canonical form: gcd(num, den) = 1, den has
// coprime integer coefficients and a positive leading coefficient, zero is
// 0/1. Equal values have identical representations; a RatFunc is a handle
// to the single interned copy of its value, so equality is identity.
class RatFunc {
 public:
  RatFunc() : RatFunc(Rational(0)) {}
  RatFunc(int c) : RatFunc(Rational(c)) {}  // NOLINT
  RatFunc(long c) : RatFunc(Rational(c)) {}  // NOLINT
  RatFunc(const Rational& c)  // NOLINT
      : rep_(detail::RatTable::instance().intern({UPoly::constant(c), UPoly::constant(1)})) {}
  RatFunc(UPoly num)  // NOLINT
      : rep_(detail::RatTable::instance().intern({std::move(num), UPoly::constant(1)})) {}
  RatFunc(UPoly num, UPoly den) {
    if (den.is_zero()) throw DivisionByZero();
    detail::canonicalize(num, den, true);
    rep_ = detail::RatTable::instance().intern({std::move(num), std::move(den)});
  }

  static RatFunc u() { return RatFunc(UPoly::u()); }

  const UPoly& num() const noexcept { return rep_->num; }
  const UPoly& den() const noexcept { return rep_->den; }
  bool is_zero() const noexcept { return rep_->num.is_zero(); }
  bool is_constant() const noexcept { return rep_->den.is_constant() && rep_->num.is_constant(); }
  bool is_one() const {
    return rep_->den.is_constant() && rep_->num.degree() == 0 && rep_->num.lead() == 1;
  }
  // Only meaningful when is_constant().
  Rational constant_value() const { return rep_->num.coeff(0); }

  RatFunc operator-() const { return RatFunc(rep_) *= RatFunc(-1); }

  RatFunc& operator+=(const RatFunc& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    auto [a, b] = ordered(rep_, o.rep_);
    rep_ = detail::RatTable::instance().binary(0, a, b, detail::add_canonical);
    return *this;
  }
  RatFunc& operator-=(const RatFunc& o) { return *this += -o; }
  RatFunc& operator*=(const RatFunc& o) {
    if (is_zero() || o.is_one()) return *this;
    if (o.is_zero() || is_one()) return *this = o;
    auto [a, b] = ordered(rep_, o.rep_);
    rep_ = detail::RatTable::instance().binary(1, a, b, detail::mul_canonical);
    return *this;
  }
  RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }

  RatFunc inverse() const {
    if (is_zero()) throw DivisionByZero();
    return RatFunc(rep_->den, rep_->num);
  }

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.rep_ == b.rep_; }

  // Textual form with integer coefficients, e.g. "(-2*u+2)/(2*u-1)", "1",
  // "1/(4*u^2-10*u+6)". The denominator is omitted when it equals 1.
  std::string to_string() const {
    if (is_zero()) return "0";
    auto [n, d] = integer_parts();
    auto wrap = [](const UPoly& p) {
      return p.term_count() > 1 ? "(" + p.to_string() + ")" : p.to_string();
    };
    if (d.degree() == 0) {
      if (d.lead() == 1) return n.to_string();
      return wrap(n) + "/" + d.to_string();
    }
    return (n.is_constant() ? n.to_string() : "(" + n.to_string() + ")") + "/(" +
           d.to_string() + ")";
  }

  // num*L and den*L with L the lcm of the numerator coefficient denominators;
  // both results have integer coefficients.
  std::pair<UPoly, UPoly> integer_parts() const {
    Integer l = 1;
    for (const auto& c : num().coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    Rational s(l);
    return {num() * s, den() * s};
  }

 private:
  explicit RatFunc(const detail::RatRep* rep) : rep_(rep) {}

  // Both operations are commutative; a fixed argument order halves the memo.
  static std::pair<const detail::RatRep*, const detail::RatRep*> ordered(const detail::RatRep* a,
                                                                           const detail::RatRep* b) {
    return std::less<const detail::RatRep*>()(a, b) ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  const detail::RatRep* rep_;
};

inline std::ostream& operator<<(std::ostream& os, const RatFunc& f) { return os << f.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const UPoly& p) { return os << p.to_string(); }

inline Rational rf_eval(const RatFunc& a, const Rational& u0) {
  Rational d = a.den().eval(u0);
  if (d == 0) throw PoleError(u0.get_str());
  return a.num().eval(u0) / d;
}

// Taylor coefficients of a in t = 1/u up to t^order.
inline TruncSeries rf_expand_at_infinity(const RatFunc& a, int order) {
  if (order < 0) throw RangeError("negative truncation order");
  const int dd = a.den().degree();
  if (a.num().degree() > dd) throw NotProperError();
  // a = N(1/t) t^dd / (D(1/t) t^dd): both reversed polynomials live in t.
  auto rn = [&](int j) { return a.num().coeff(dd - j); };
  auto rd = [&](int j) { return a.den().coeff(dd - j); };
  TruncSeries s;
  s.coeffs.resize(order + 1);
  const Rational d0 = rd(0);
  for (int r = 0; r <= order; ++r) {
    Rational acc = r <= dd ? rn(r) : Rational(0);
    for (int j = 1; j <= std::min(r, dd); ++j) acc -= rd(j) * s.coeffs[r - j];
    s.coeffs[r] = acc / d0;
  }
  return s;
}

// Limit as u -> infinity; throws NotProperError for improper functions.
inline Rational rf_limit_at_infinity(const RatFunc& a) {
  return rf_expand_at_infinity(a, 0).coeffs[0];
}

}  // namespace sdet
