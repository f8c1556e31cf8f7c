#pragma once

// Symmetric-group machinery: permutations in cycle notation, word
// restriction, the index set I_n, the kappa <-> eta bijection and the
// alpha coefficients attached to tuples and permutations.
//
// Composition convention: (s * t)(x) = s(t(x)). A product of transpositions
// written left to right applies its rightmost factor first.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdet/errors.hpp"
#include "sdet/scalars.hpp"

namespace sdet {

class Perm {
 public:
  Perm() = default;

  // images[i-1] = sigma(i), values 1-based.
  explicit Perm(std::vector<int> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size() + 1, false);
    for (int v : img_) {
      if (v < 1 || v > size() || seen[v]) throw RangeError("images do not form a permutation");
      seen[v] = true;
    }
  }

  static Perm identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Perm(std::move(v));
  }

  // (a, b); (a, a) is the identity.
  static Perm transposition(int n, int a, int b) {
    if (a < 1 || a > n || b < 1 || b > n) throw RangeError("transposition index out of range");
    Perm p = identity(n);
    std::swap(p.img_[a - 1], p.img_[b - 1]);
    return p;
  }

  // Each cycle (c_1, ..., c_m) maps c_i -> c_{i+1} and c_m -> c_1.
  static Perm from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    Perm p = identity(n);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    for (const auto& cyc : cycles) {
      for (int x : cyc) {
        if (x < 1 || x > n) throw RangeError("cycle element out of range");
        if (used[x]) throw RangeError("cycles are not disjoint");
        used[x] = true;
      }
      for (std::size_t i = 0; i < cyc.size(); ++i) p.img_[cyc[i] - 1] = cyc[(i + 1) % cyc.size()];
    }
    return p;
  }

  // Parses cycle notation such as "(1,5,7,3)(4)(6,2)". With n = 0 the degree
  // is the largest element mentioned.
  static Perm parse(std::string_view text, int n = 0) {
    std::vector<std::vector<int>> cycles;
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto expect = [&](char c) {
      skip();
      if (i >= text.size() || text[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
      ++i;
    };
    int largest = 0;
    skip();
    if (i < text.size() && text.substr(i) == "id") {
      if (n == 0) throw ParseError("identity needs an explicit degree", i);
      return identity(n);
    }
    while (skip(), i < text.size()) {
      expect('(');
      std::vector<int> cyc;
      for (;;) {
        skip();
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) throw ParseError("expected a positive integer", start);
        cyc.push_back(std::stoi(std::string(text.substr(start, i - start))));
        largest = std::max(largest, cyc.back());
        skip();
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        expect(')');
        break;
      }
      cycles.push_back(std::move(cyc));
    }
    if (cycles.empty()) throw ParseError("empty permutation", 0);
    const int deg = n == 0 ? largest : n;
    if (largest > deg) throw ParseError("element exceeds the permutation degree", 0);
    return from_cycles(deg, cycles);
  }

  int size() const noexcept { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<int>& images() const noexcept { return img_; }
  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (img_[i] != i + 1) return false;
    return true;
  }

  Perm inverse() const {
    std::vector<int> v(img_.size());
    for (int i = 0; i < size(); ++i) v[img_[i] - 1] = i + 1;
    return Perm(std::move(v));
  }

  // Cycles with the minimum element first, sorted by minimum; fixed points
  // are included as 1-cycles.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(img_.size() + 1, false);
    for (int s = 1; s <= size(); ++s) {
      if (seen[s]) continue;
      std::vector<int> cyc;
      for (int x = s; !seen[x]; x = (*this)(x)) {
        seen[x] = true;
        cyc.push_back(x);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  int sign() const {
    int s = 1;
    for (const auto& c : cycles())
      if (c.size() % 2 == 0) s = -s;
    return s;
  }

  std::string to_cycle_string() const {
    std::string s;
    for (const auto& c : cycles()) {
      s += "(";
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
      }
      s += ")";
    }
    return s;
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    if (a.size() != b.size()) throw RangeError("composing permutations of different degree");
    std::vector<int> v(a.img_.size());
    for (int i = 0; i < a.size(); ++i) v[i] = a.img_[b.img_[i] - 1];
    return Perm(std::move(v));
  }
  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<int> img_;
};

inline std::ostream& operator<<(std::ostream& os, const Perm& p) { return os << p.to_cycle_string(); }

// All of S_n, lexicographic in the image sequence.
inline std::vector<Perm> all_perms(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<Perm> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// Deletes from every cycle word the letters outside G. The result permutes
// G and fixes everything else.
inline Perm word_restriction(const Perm& sigma, const std::set<int>& G) {
  std::vector<std::vector<int>> restricted;
  for (const auto& cyc : sigma.cycles()) {
    std::vector<int> w;
    for (int x : cyc)
      if (G.count(x)) w.push_back(x);
    if (!w.empty()) restricted.push_back(std::move(w));
  }
  return Perm::from_cycles(sigma.size(), restricted);
}

inline std::set<int> interval_set(int lo, int hi) {
  std::set<int> s;
  for (int i = lo; i <= hi; ++i) s.insert(i);
  return s;
}

// ---------------------------------------------------------------------------
// The index set I_n.

// (k_1, ..., k_n) with i <= k_i <= n.
class IdxTuple {
 public:
  IdxTuple() = default;
  explicit IdxTuple(std::vector<int> k) : k_(std::move(k)) {
    for (int i = 1; i <= size(); ++i)
      if (k_[i - 1] < i || k_[i - 1] > size()) throw RangeError("tuple is not in I_n");
  }

  int size() const noexcept { return static_cast<int>(k_.size()); }
  int operator()(int i) const { return k_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<int>& values() const noexcept { return k_; }
  bool is_identity() const {
    for (int i = 1; i <= size(); ++i)
      if (k_[i - 1] != i) return false;
    return true;
  }

  friend bool operator==(const IdxTuple&, const IdxTuple&) = default;
  friend auto operator<=>(const IdxTuple&, const IdxTuple&) = default;

 private:
  std::vector<int> k_;
};

inline std::string to_string(const IdxTuple& t) {
  std::string s = "(";
  for (int i = 1; i <= t.size(); ++i) {
    if (i > 1) s += ",";
    s += std::to_string(t(i));
  }
  return s + ")";
}

// Lexicographic order; n! elements.
inline std::vector<IdxTuple> enum_In(int n) {
  if (n < 1) throw RangeError("n must be at least 1");
  std::vector<IdxTuple> out;
  std::vector<int> k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) k[i] = i + 1;
  for (;;) {
    out.emplace_back(k);
    int pos = n - 1;
    while (pos >= 0 && k[pos] == n) {
      k[pos] = pos + 1;
      --pos;
    }
    if (pos < 0) break;
    ++k[pos];
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// 1 / (a*u + b)
inline RatFunc inv_linear(long a, long b) {
  return RatFunc(UPoly::constant(1), UPoly::linear(Rational(a), Rational(b)));
}

}  // namespace detail

// prod_{i < k_i} 1/(n - 2u - 2 + i)
inline RatFunc alpha_kappa(const IdxTuple& kappa) {
  const int n = kappa.size();
  RatFunc a(1);
  for (int i = 1; i <= n; ++i)
    if (i < kappa(i)) a *= detail::inv_linear(-2, n - 2 + i);
  return a;
}

// q^[i] = (n, k_n)(n-1, k_{n-1}) ... (i, k_i).
inline Perm q_kappa(const IdxTuple& kappa, int i) {
  const int n = kappa.size();
  if (i < 1 || i > n) throw RangeError("q_kappa level out of range");
  Perm q = Perm::identity(n);
  for (int j = n; j >= i; --j) q = q * Perm::transposition(n, j, kappa(j));
  return q;
}

// eta_i = q^[i](i)
inline IdxTuple kappa_to_eta(const IdxTuple& kappa) {
  const int n = kappa.size();
  std::vector<int> eta(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) eta[i - 1] = q_kappa(kappa, i)(i);
  return IdxTuple(std::move(eta));
}

// k_n = eta_n, k_i = (i+1, k_{i+1}) ... (n, k_n) (eta_i).
inline IdxTuple eta_to_kappa(const IdxTuple& eta) {
  const int n = eta.size();
  std::vector<int> k(static_cast<std::size_t>(n));
  k[n - 1] = eta(n);
  // inv = (i+1, k_{i+1}) ... (n, k_n), grown on the left as i decreases.
  Perm inv = Perm::identity(n);
  for (int i = n - 1; i >= 1; --i) {
    inv = Perm::transposition(n, i + 1, k[i]) * inv;
    k[i - 1] = inv(eta(i));
  }
  return IdxTuple(std::move(k));
}

// p^[n] = Id, p^[i] = p^[i+1] (i, (p^[i+1])^{-1}(eta_i)); p_eta = p^[1].
inline Perm p_eta(const IdxTuple& eta) {
  const int n = eta.size();
  Perm p = Perm::identity(n);
  for (int i = n - 1; i >= 1; --i) p = p * Perm::transposition(n, i, p.inverse()(eta(i)));
  return p;
}

// prod over non-maximal cycle elements g of 1/(n - 2u - 2 + g).
inline RatFunc alpha_bar(const Perm& sigma) {
  const int n = sigma.size();
  RatFunc a(1);
  for (const auto& cyc : sigma.cycles()) {
    const int top = *std::max_element(cyc.begin(), cyc.end());
    for (int g : cyc)
      if (g != top) a *= detail::inv_linear(-2, n - 2 + g);
  }
  return a;
}

struct EtaData {
  IdxTuple eta;
  std::vector<int> image;  // sorted
  Perm gamma;              // product of increasing cycles over preimages
  std::set<int> gmin;
  std::set<int> gmax;
};

inline EtaData eta_data(const IdxTuple& eta) {
  const int n = eta.size();
  EtaData d{eta, {}, Perm::identity(n), {}, {}};
  std::vector<std::vector<int>> cycles;
  for (int N = 1; N <= n; ++N) {
    std::vector<int> pre;
    for (int i = 1; i <= n; ++i)
      if (eta(i) == N) pre.push_back(i);
    if (pre.empty()) continue;
    d.image.push_back(N);
    d.gmin.insert(pre.front());
    d.gmax.insert(pre.back());
    cycles.push_back(std::move(pre));
  }
  d.gamma = Perm::from_cycles(n, cycles);
  return d;
}

// Permutations acting trivially off Im(eta); |Im(eta)|! of them.
inline std::vector<Perm> S_eta(const IdxTuple& eta) {
  const EtaData d = eta_data(eta);
  const int n = eta.size();
  std::vector<int> targets = d.image;
  std::vector<Perm> out;
  do {
    std::vector<int> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 1);
    for (std::size_t j = 0; j < targets.size(); ++j) img[d.image[j] - 1] = targets[j];
    out.emplace_back(std::move(img));
  } while (std::next_permutation(targets.begin(), targets.end()));
  return out;
}

// (-1)^sigma prod_{i < eta_i} 1/(2u + 2 - i - n)
inline RatFunc alpha_sigma_eta(const Perm& sigma, const IdxTuple& eta) {
  const int n = eta.size();
  RatFunc a(sigma.sign());
  for (int i = 1; i <= n; ++i)
    if (i < eta(i)) a *= detail::inv_linear(2, 2 - i - n);
  return a;
}

}  // namespace sdet
