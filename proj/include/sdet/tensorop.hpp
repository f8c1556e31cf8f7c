#pragma once

// Sparse operators on (C^n)^{(x)n} with AlgElem entries.
//
// A basis vector e_{t_1} x ... x e_{t_n} is addressed by the MultiIdx
// (t_1, ..., t_n), 1-based. Internally a MultiIdx is packed into an integer
// code with slot 1 most significant, so code order is row-major
// lexicographic order on tuples.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sdet/errors.hpp"
#include "sdet/freealg.hpp"
#include "sdet/permcomb.hpp"
#include "sdet/scalars.hpp"

namespace sdet {

using MultiIdx = std::vector<int>;

inline std::string to_string(const MultiIdx& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m[i]);
  }
  return s + ")";
}

class TOp {
 public:
  using Code = std::uint32_t;
  using Column = std::map<Code, AlgElem>;

  // The zero operator.
  explicit TOp(int n) : n_(n) {
    if (n < 1 || n > 8) throw RangeError("slot count must be in 1..8");
    dim_ = 1;
    for (int i = 0; i < n; ++i) dim_ *= static_cast<Code>(n);
    cols_.resize(dim_);
  }

  static TOp identity(int n) {
    TOp op(n);
    for (Code c = 0; c < op.dim_; ++c) op.cols_[c].emplace(c, AlgElem(1));
    return op;
  }

  int n() const noexcept { return n_; }
  Code dim() const noexcept { return dim_; }
  const Column& column(Code c) const { return cols_.at(c); }

  Code encode(const MultiIdx& m) const {
    if (static_cast<int>(m.size()) != n_) throw RangeError("multi-index has wrong length");
    Code code = 0;
    for (int t : m) {
      if (t < 1 || t > n_) throw RangeError("multi-index entry out of range");
      code = code * static_cast<Code>(n_) + static_cast<Code>(t - 1);
    }
    return code;
  }
  MultiIdx decode(Code code) const {
    MultiIdx m(static_cast<std::size_t>(n_));
    for (int s = n_ - 1; s >= 0; --s) {
      m[s] = static_cast<int>(code % static_cast<Code>(n_)) + 1;
      code /= static_cast<Code>(n_);
    }
    return m;
  }

  AlgElem entry(const MultiIdx& row, const MultiIdx& col) const {
    const Column& c = cols_.at(encode(col));
    auto it = c.find(encode(row));
    return it == c.end() ? AlgElem() : it->second;
  }

  void add(Code row, Code col, const AlgElem& v) {
    if (v.is_zero()) return;
    Column& c = cols_.at(col);
    auto [it, inserted] = c.try_emplace(row, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  std::size_t nnz() const {
    std::size_t k = 0;
    for (const auto& c : cols_) k += c.size();
    return k;
  }

  // Total number of (row, column, word) triples.
  std::size_t term_count() const {
    std::size_t k = 0;
    for (const auto& c : cols_)
      for (const auto& [r, v] : c) k += v.size();
    return k;
  }

  TOp& operator+=(const TOp& o) {
    check_same(o);
    for (Code c = 0; c < dim_; ++c)
      for (const auto& [r, v] : o.cols_[c]) add(r, c, v);
    return *this;
  }
  TOp& operator-=(const TOp& o) {
    check_same(o);
    for (Code c = 0; c < dim_; ++c)
      for (const auto& [r, v] : o.cols_[c]) add(r, c, -v);
    return *this;
  }
  TOp& operator*=(const RatFunc& s) {
    if (s.is_zero()) {
      for (auto& c : cols_) c.clear();
      return *this;
    }
    for (auto& c : cols_)
      for (auto& [r, v] : c) v *= s;
    return *this;
  }
  friend TOp operator+(TOp a, const TOp& b) { return a += b; }
  friend TOp operator-(TOp a, const TOp& b) { return a -= b; }
  friend TOp operator*(TOp a, const RatFunc& s) { return a *= s; }
  friend TOp operator*(const RatFunc& s, TOp a) { return a *= s; }

  // (XY)[r, c] = sum_m X[r, m] Y[m, c]; entry products keep the order X then Y.
  friend TOp operator*(const TOp& x, const TOp& y) {
    x.check_same(y);
    TOp out(x.n_);
    for (Code c = 0; c < x.dim_; ++c) {
      Column& dst = out.cols_[c];
      for (const auto& [m, ym] : y.cols_[c])
        for (const auto& [r, xr] : x.cols_[m]) dst[r].add_product(xr, ym);
      std::erase_if(dst, [](const auto& kv) { return kv.second.is_zero(); });
    }
    return out;
  }

  // X v for a column vector v; entry products keep the order X then v.
  Column apply(const Column& v) const {
    Column out;
    for (const auto& [m, vm] : v)
      for (const auto& [r, xr] : cols_.at(m)) out[r].add_product(xr, vm);
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
  }

  friend bool operator==(const TOp& a, const TOp& b) { return a.n_ == b.n_ && a.cols_ == b.cols_; }

  // Entries in row-major order, one "row -> col : value" line each.
  std::string dump() const {
    std::vector<std::pair<Code, Code>> keys;
    for (Code c = 0; c < dim_; ++c)
      for (const auto& [r, v] : cols_[c]) keys.emplace_back(r, c);
    std::sort(keys.begin(), keys.end());
    std::ostringstream os;
    for (const auto& [r, c] : keys)
      os << to_string(decode(r)) << " -> " << to_string(decode(c)) << " : " << cols_[c].at(r) << "\n";
    return os.str();
  }

 private:
  void check_same(const TOp& o) const {
    if (o.n_ != n_) throw RangeError("operators act on different spaces");
  }

  int n_;
  Code dim_ = 0;
  std::vector<Column> cols_;
};

inline TOp t_mul(const TOp& x, const TOp& y) { return x * y; }

// Column of X at basis vector v, keyed by output multi-index.
inline std::map<MultiIdx, AlgElem> t_apply(const TOp& x, const MultiIdx& v) {
  std::map<MultiIdx, AlgElem> out;
  for (const auto& [r, e] : x.column(x.encode(v))) out.emplace(x.decode(r), e);
  return out;
}

// Location and values of the first entry (column-major code order) where two
// operators differ, or nullopt when they are equal.
inline std::optional<std::string> first_difference(const TOp& a, const TOp& b) {
  if (a.n() != b.n()) return "operators act on different spaces";
  for (TOp::Code c = 0; c < a.dim(); ++c) {
    const auto& ca = a.column(c);
    const auto& cb = b.column(c);
    if (ca == cb) continue;
    std::set<TOp::Code> rows;
    for (const auto& kv : ca) rows.insert(kv.first);
    for (const auto& kv : cb) rows.insert(kv.first);
    for (TOp::Code r : rows) {
      auto ia = ca.find(r);
      auto ib = cb.find(r);
      AlgElem va = ia == ca.end() ? AlgElem() : ia->second;
      AlgElem vb = ib == cb.end() ? AlgElem() : ib->second;
      if (va == vb) continue;
      std::ostringstream os;
      os << "entry " << to_string(a.decode(r)) << " <- " << to_string(a.decode(c)) << ": " << va
         << " vs " << vb;
      return os.str();
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Builders.

namespace detail {

inline TOp::Code permute_code(const TOp& op, TOp::Code col, const Perm& pi) {
  const MultiIdx c = op.decode(col);
  MultiIdx r(c.size());
  for (int i = 1; i <= pi.size(); ++i) r[pi(i) - 1] = c[i - 1];
  return op.encode(r);
}

inline void check_slot(int n, int s) {
  if (s < 1 || s > n) throw RangeError("slot index " + std::to_string(s) + " outside 1.." + std::to_string(n));
}

}  // namespace detail

// Slot permutation: the vector in slot i moves to slot pi(i). This makes
// perm_op a homomorphism, perm_op(s * t) = perm_op(s) perm_op(t).
inline TOp perm_op(const Perm& pi) {
  TOp op(pi.size());
  for (TOp::Code c = 0; c < op.dim(); ++c) op.add(detail::permute_code(op, c, pi), c, AlgElem(1));
  return op;
}

// P_ij; P_ii is the identity.
inline TOp P(int n, int i, int j) {
  detail::check_slot(n, i);
  detail::check_slot(n, j);
  return perm_op(Perm::transposition(n, i, j));
}

// R_ij(arg) = Id - P_ij / arg.
inline TOp R_op(int n, int i, int j, const UPoly& arg) {
  if (arg.is_zero()) throw DivisionByZero();
  detail::check_slot(n, i);
  detail::check_slot(n, j);
  const RatFunc coeff = -RatFunc(UPoly::constant(1), arg);
  TOp op = TOp::identity(n);
  const Perm t = Perm::transposition(n, i, j);
  for (TOp::Code c = 0; c < op.dim(); ++c) op.add(detail::permute_code(op, c, t), c, AlgElem(coeff));
  return op;
}

// Signed sum of the permutations of slots lo..hi.
inline TOp antisym_slots(int n, int lo, int hi) {
  if (lo < 1 || hi > n || lo > hi + 1) throw RangeError("antisymmetrizer slot range out of bounds");
  TOp op(n);
  if (lo > hi) return TOp::identity(n);
  std::vector<Perm> local = all_perms(hi - lo + 1);
  std::vector<std::pair<Perm, int>> perms;
  for (const auto& p : local) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) img[i - 1] = (i >= lo && i <= hi) ? p(i - lo + 1) + lo - 1 : i;
    perms.emplace_back(Perm(std::move(img)), p.sign());
  }
  for (TOp::Code c = 0; c < op.dim(); ++c) {
    std::map<TOp::Code, long> acc;
    for (const auto& [pi, sgn] : perms) acc[detail::permute_code(op, c, pi)] += sgn;
    for (const auto& [r, v] : acc)
      if (v != 0) op.add(r, c, AlgElem(v));
  }
  return op;
}

inline TOp antisym_full(int n) { return antisym_slots(n, 1, n); }
// A_k on the first k slots.
inline TOp antisym_first(int n, int k) {
  if (k < 0 || k > n) throw RangeError("antisymmetrizer size out of range");
  return antisym_slots(n, 1, k);
}
// A'_m on the last m slots.
inline TOp antisym_last(int n, int m) {
  if (m < 0 || m > n) throw RangeError("antisymmetrizer size out of range");
  return antisym_slots(n, n - m + 1, n);
}

// Pi_k = Id - (2u - k - n + 2)^{-1} sum_{i=k+1}^{n} P_ki.
inline TOp Pi_k(int n, int k) {
  detail::check_slot(n, k);
  TOp sum(n);
  for (int i = k + 1; i <= n; ++i) sum += P(n, k, i);
  const RatFunc c = -RatFunc(UPoly::constant(1), UPoly::linear(2, 2 - k - n));
  return TOp::identity(n) + sum * c;
}

// B(u - shift) embedded at slot s: E_pq at slot s tensored with b_p^q(u - shift).
inline TOp B_slot(int n, int s, int shift) {
  detail::check_slot(n, s);
  if (shift < 0) throw RangeError("negative shift");
  TOp op(n);
  for (TOp::Code c = 0; c < op.dim(); ++c) {
    MultiIdx r = op.decode(c);
    const int q = r[s - 1];
    for (int p = 1; p <= n; ++p) {
      r[s - 1] = p;
      op.add(op.encode(r), c, AlgElem::generator(p, q, shift));
    }
  }
  return op;
}

}  // namespace sdet
