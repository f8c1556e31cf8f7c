#pragma once

// Sklyanin determinant of the reflection algebra generating matrix B(u),
// computed over the free algebra by seven routes:
//
//   def  column extraction of A_n <B_1, ..., B_n> (products of R-matrices)
//   pi   column extraction of A_n <<B_1, ..., B_n>> (Pi_k operators)
//   bp   sum over kappa in I_n of alpha(kappa) B_1 P_{1k_1} ... B_n P_{nk_n}
//   qa   the same sum with all P's moved to the front
//   qb   sum over eta in I_n of alpha(eta) p_eta^{-1} B_{eta_1} ... B_{eta_n}
//   qc   sum over sigma in S_n with word-restricted slot labels
//   thm  closed combinatorial formula with implicitly summed indices
//
// Every route except thm produces an operator; sdet is read off the
// identity column of A_n times that operator.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdet/errors.hpp"
#include "sdet/freealg.hpp"
#include "sdet/permcomb.hpp"
#include "sdet/scalars.hpp"
#include "sdet/tensorop.hpp"

namespace sdet {

enum class Path { def, pi, bp, qa, qb, qc, thm };

inline constexpr std::array<Path, 7> kAllPaths = {Path::def, Path::pi, Path::bp, Path::qa,
                                                  Path::qb,  Path::qc, Path::thm};

inline std::string_view path_name(Path p) {
  switch (p) {
    case Path::def: return "def";
    case Path::pi: return "pi";
    case Path::bp: return "bp";
    case Path::qa: return "qa";
    case Path::qb: return "qb";
    case Path::qc: return "qc";
    case Path::thm: return "thm";
  }
  return "?";
}

inline std::optional<Path> parse_path(std::string_view s) {
  for (Path p : kAllPaths)
    if (path_name(p) == s) return p;
  return std::nullopt;
}

struct SdetResult {
  int n = 0;
  Path path = Path::def;
  AlgElem value;

  friend bool operator==(const SdetResult&, const SdetResult&) = default;
};

namespace detail {

inline void check_n(int n) {
  if (n < 1 || n > 6) throw RangeError("n must be in 1..6");
}

// One summand coeff * F_1 F_2 ... F_m of a path operator. Factors are shared
// between summands.
struct ChainTerm {
  RatFunc coeff;
  std::vector<std::shared_ptr<const TOp>> factors;
};
using Chain = std::vector<ChainTerm>;

// Memoized B_s(u - shift) and P_ij for one n.
class FactorCache {
 public:
  explicit FactorCache(int n) : n_(n) {}

  std::shared_ptr<const TOp> b(int slot, int shift) {
    return memo(b_, {slot, shift}, [&] { return B_slot(n_, slot, shift); });
  }
  std::shared_ptr<const TOp> p(int i, int j) {
    return memo(p_, {std::min(i, j), std::max(i, j)}, [&] { return P(n_, i, j); });
  }
  static std::shared_ptr<const TOp> own(TOp x) { return std::make_shared<const TOp>(std::move(x)); }

 private:
  using Memo = std::map<std::pair<int, int>, std::shared_ptr<const TOp>>;
  template <class Make>
  std::shared_ptr<const TOp> memo(Memo& m, std::pair<int, int> key, Make make) {
    auto it = m.find(key);
    if (it == m.end()) it = m.emplace(key, own(make())).first;
    return it->second;
  }

  int n_;
  Memo b_, p_;
};

// Appends B_{slot(1)}(u) B_{slot(2)}(u-1) ... B_{slot(n)}(u-n+1).
template <class SlotFn>
void push_b_chain(int n, FactorCache& fc, ChainTerm& t, SlotFn slot) {
  for (int i = 1; i <= n; ++i) t.factors.push_back(fc.b(slot(i), i - 1));
}

// <B_1, ..., B_k> = B_1(u)(R_12 ... R_1k) B_2(u-1)(R_23 ... R_2k) ... B_k(u-k+1)
// with R_ij = R_ij(2u - i - j + 2), acting on n slots.
inline Chain chain_bracket(int n, int k) {
  FactorCache fc(n);
  ChainTerm t{RatFunc(1), {}};
  for (int i = 1; i <= k; ++i) {
    t.factors.push_back(fc.b(i, i - 1));
    for (int j = i + 1; j <= k; ++j) t.factors.push_back(FactorCache::own(R_op(n, i, j, UPoly::linear(2, 2 - i - j))));
  }
  return {t};
}

// <<B_1, ..., B_n>> = B_1(u) Pi_1 B_2(u-1) Pi_2 ... Pi_{n-1} B_n(u-n+1)
inline Chain chain_pi(int n) {
  FactorCache fc(n);
  ChainTerm t{RatFunc(1), {fc.b(1, 0)}};
  for (int i = 2; i <= n; ++i) {
    t.factors.push_back(FactorCache::own(Pi_k(n, i - 1)));
    t.factors.push_back(fc.b(i, i - 1));
  }
  return {t};
}

// sum_kappa alpha(kappa) B_1(u) P_{1k_1} B_2(u-1) P_{2k_2} ... B_n(u-n+1) P_{nk_n}
inline Chain chain_bp(int n) {
  FactorCache fc(n);
  Chain c;
  for (const IdxTuple& kappa : enum_In(n)) {
    ChainTerm t{alpha_kappa(kappa), {}};
    for (int i = 1; i <= n; ++i) {
      t.factors.push_back(fc.b(i, i - 1));
      if (kappa(i) != i) t.factors.push_back(fc.p(i, kappa(i)));
    }
    c.push_back(std::move(t));
  }
  return c;
}

// sum_kappa alpha(kappa) Q_kappa^{-1} B_{q^[1](1)}(u) ... B_{q^[n](n)}(u-n+1)
// with Q_kappa^{-1} = P_{1k_1} ... P_{nk_n}.
inline Chain chain_qa(int n) {
  FactorCache fc(n);
  Chain c;
  for (const IdxTuple& kappa : enum_In(n)) {
    ChainTerm t{alpha_kappa(kappa), {}};
    for (int i = 1; i <= n; ++i)
      if (kappa(i) != i) t.factors.push_back(fc.p(i, kappa(i)));
    push_b_chain(n, fc, t, [&](int i) { return q_kappa(kappa, i)(i); });
    c.push_back(std::move(t));
  }
  return c;
}

// sum_eta alpha(eta) p_eta^{-1} B_{eta_1}(u) ... B_{eta_n}(u-n+1)
inline Chain chain_qb(int n) {
  FactorCache fc(n);
  Chain c;
  for (const IdxTuple& eta : enum_In(n)) {
    ChainTerm t{alpha_kappa(eta), {FactorCache::own(perm_op(p_eta(eta).inverse()))}};
    push_b_chain(n, fc, t, [&](int i) { return eta(i); });
    c.push_back(std::move(t));
  }
  return c;
}

// sum_sigma alpha_bar(sigma) sigma^{-1} B_{sigma^[1](1)}(u) ... B_{sigma^[n](n)}(u-n+1)
// where sigma^[i] is the word restriction of sigma to {i, ..., n}.
inline Chain chain_qc(int n) {
  FactorCache fc(n);
  Chain c;
  for (const Perm& sigma : all_perms(n)) {
    ChainTerm t{alpha_bar(sigma), {FactorCache::own(perm_op(sigma.inverse()))}};
    push_b_chain(n, fc, t, [&](int i) { return word_restriction(sigma, interval_set(i, n))(i); });
    c.push_back(std::move(t));
  }
  return c;
}

inline Chain path_chain(int n, Path path) {
  check_n(n);
  switch (path) {
    case Path::def: return chain_bracket(n, n);
    case Path::pi: return chain_pi(n);
    case Path::bp: return chain_bp(n);
    case Path::qa: return chain_qa(n);
    case Path::qb: return chain_qb(n);
    case Path::qc: return chain_qc(n);
    case Path::thm: break;
  }
  throw RangeError("path has no operator form");
}

// Products are formed left to right, one summand at a time.
inline TOp multiply_out(int n, const Chain& chain) {
  TOp total(n);
  for (const ChainTerm& t : chain) {
    TOp x = *t.factors.front();
    for (std::size_t i = 1; i < t.factors.size(); ++i) x = x * *t.factors[i];
    if (chain.size() == 1 && t.coeff == RatFunc(1)) return x;
    total += x * t.coeff;
  }
  return total;
}

// Column c of the chain's operator, applying factors right to left to e_c.
inline TOp::Column apply_to_basis(const Chain& chain, TOp::Code c) {
  TOp::Column total;
  for (const ChainTerm& t : chain) {
    TOp::Column v{{c, AlgElem(1)}};
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) v = (*it)->apply(v);
    for (auto& [r, e] : v) {
      e *= t.coeff;
      total[r] += e;
    }
  }
  std::erase_if(total, [](const auto& kv) { return kv.second.is_zero(); });
  return total;
}

inline TOp::Code identity_code(int n) {
  TOp::Code code = 0;
  for (int i = 0; i < n; ++i) code = code * static_cast<TOp::Code>(n) + static_cast<TOp::Code>(i);
  return code;
}

}  // namespace detail

// Above this size compute_sdet extracts from a single column instead of the
// full operator; 5^5 x 5^5 operators with word entries do not fit in memory.
inline constexpr int kFullOperatorMaxN = 4;

inline TOp bracket(int n, int k) {
  detail::check_n(n);
  if (k < 1 || k > n) throw RangeError("bracket length out of range");
  return detail::multiply_out(n, detail::chain_bracket(n, k));
}

inline TOp bracket_pi(int n) {
  detail::check_n(n);
  return detail::multiply_out(n, detail::chain_pi(n));
}

inline TOp expand_bp(int n) { return detail::multiply_out(n, detail::path_chain(n, Path::bp)); }
inline TOp expand_qa(int n) { return detail::multiply_out(n, detail::path_chain(n, Path::qa)); }
inline TOp expand_qb(int n) { return detail::multiply_out(n, detail::path_chain(n, Path::qb)); }
inline TOp expand_qc(int n) { return detail::multiply_out(n, detail::path_chain(n, Path::qc)); }

inline TOp path_operator(int n, Path path) { return detail::multiply_out(n, detail::path_chain(n, path)); }

// Column X e_c with X = path_operator(n, path), computed without forming X.
inline TOp::Column path_column(int n, Path path, TOp::Code c) {
  return detail::apply_to_basis(detail::path_chain(n, path), c);
}

// A_n applied to a column vector of an n-slot operator.
inline TOp::Column antisymmetrize(int n, const TOp::Column& v) {
  static thread_local std::map<int, TOp> antisym_cache;
  auto it = antisym_cache.find(n);
  if (it == antisym_cache.end()) it = antisym_cache.emplace(n, antisym_full(n)).first;
  return it->second.apply(v);
}

// Given the column X e_1 x ... x e_n, checks that A_n X e_1 x ... x e_n is
// S times A_n(e_1 x ... x e_n) and returns S.
inline AlgElem extract_sdet_column(int n, const TOp::Column& xcol) {
  const TOp::Code idc = detail::identity_code(n);
  const TOp::Column col = antisymmetrize(n, xcol);
  auto it = col.find(idc);
  const AlgElem s = it == col.end() ? AlgElem() : it->second;
  const TOp shape(n);
  std::size_t seen = 0;
  for (const auto& [r, v] : col) {
    const MultiIdx row = shape.decode(r);
    std::vector<int> img(row.begin(), row.end());
    std::vector<bool> hit(static_cast<std::size_t>(n) + 1, false);
    bool perm = true;
    for (int t : img) {
      if (hit[t]) perm = false;
      hit[t] = true;
    }
    if (!perm) throw ExtractionError("nonzero component at non-permutation index " + to_string(row));
    const int sgn = Perm(img).sign();
    if (!(v == (sgn > 0 ? s : -s)))
      throw ExtractionError("component at " + to_string(row) + " is not sign * S");
    ++seen;
  }
  if (!s.is_zero()) {
    std::size_t fact = 1;
    for (int i = 2; i <= n; ++i) fact *= static_cast<std::size_t>(i);
    if (seen != fact) throw ExtractionError("missing permutation components");
  }
  return s;
}

// Applies A_n X to e_1 x ... x e_n, checks that the image is S times
// A_n(e_1 x ... x e_n), and returns S.
inline AlgElem extract_sdet(const TOp& x) {
  return extract_sdet_column(x.n(), x.column(detail::identity_code(x.n())));
}

// Closed formula: for each eta in I_n and sigma in S(eta) the word
// prod_k b_{p(k)}^{q(k)}(u-k+1) with
//   p(k) = sigma(eta(k)) if k in G^-, else s_k
//   q(k) = eta(k)        if k in G^+, else s_{gamma(k)}
// summed over all free indices s_t, weighted by alpha(sigma, eta).
inline AlgElem theorem_contribution(const IdxTuple& eta) {
  const int n = eta.size();
  const EtaData d = eta_data(eta);
  std::vector<int> free_idx;
  for (int k = 1; k <= n; ++k)
    if (!d.gmin.count(k)) free_idx.push_back(k);
  AlgElem total;
  for (const Perm& sigma : S_eta(eta)) {
    const RatFunc coeff = alpha_sigma_eta(sigma, eta);
    std::vector<int> s(static_cast<std::size_t>(n) + 1, 1);
    for (;;) {
      Word w(static_cast<std::size_t>(n));
      for (int k = 1; k <= n; ++k) {
        const int p = d.gmin.count(k) ? sigma(eta(k)) : s[k];
        const int q = d.gmax.count(k) ? eta(k) : s[d.gamma(k)];
        w[k - 1] = GenSym{p, q, k - 1};
      }
      total.add_term(w, coeff);
      std::size_t pos = 0;
      while (pos < free_idx.size() && s[free_idx[pos]] == n) s[free_idx[pos++]] = 1;
      if (pos == free_idx.size()) break;
      ++s[free_idx[pos]];
    }
  }
  return total;
}

inline AlgElem sdet_theorem(int n) {
  detail::check_n(n);
  AlgElem total;
  for (const IdxTuple& eta : enum_In(n)) total += theorem_contribution(eta);
  return total;
}

inline SdetResult compute_sdet(int n, Path path) {
  if (path == Path::thm) return {n, path, sdet_theorem(n)};
  if (n > kFullOperatorMaxN) return {n, path, extract_sdet_column(n, path_column(n, path, detail::identity_code(n)))};
  return {n, path, extract_sdet(path_operator(n, path))};
}

// Every word has length n with shifts 0, 1, ..., n-1 in order.
inline bool has_sdet_word_shape(const AlgElem& s, int n) {
  for (const auto& [w, c] : s.terms()) {
    if (static_cast<int>(w.size()) != n) return false;
    for (int k = 0; k < n; ++k)
      if (w[k].shift != k || w[k].p < 1 || w[k].p > n || w[k].q < 1 || w[k].q > n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cross-check harness.

struct CheckLine {
  std::string name;
  bool passed = false;
  bool informational = false;  // recorded, never counted as a failure
  std::string detail;
  bool skipped = false;  // not evaluated at this n; never counted as a failure
};

struct CrossCheckReport {
  int n = 0;
  std::vector<CheckLine> lines;
  std::map<Path, AlgElem> values;

  bool passed() const {
    for (const auto& l : lines)
      if (!l.informational && !l.skipped && !l.passed) return false;
    return true;
  }

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& l : lines) {
      os << (l.skipped ? "[SKIP] " : l.informational ? "[INFO] " : l.passed ? "[PASS] " : "[FAIL] ") << "n=" << n << " "
         << l.name;
      if (l.informational) os << ": " << (l.passed ? "holds" : "does not hold");
      if (!l.detail.empty()) os << " (" << l.detail << ")";
      os << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline CheckLine compare_ops(std::string name, const TOp& a, const TOp& b) {
  auto diff = first_difference(a, b);
  return {std::move(name), !diff, false, diff.value_or("")};
}

inline std::string first_word_difference(const AlgElem& a, const AlgElem& b) {
  std::map<Word, std::pair<RatFunc, RatFunc>> all;
  for (const auto& [w, c] : a.terms()) all[w].first = c;
  for (const auto& [w, c] : b.terms()) all[w].second = c;
  for (const auto& [w, cc] : all)
    if (!(cc.first == cc.second))
      return to_string(w) + ": " + cc.first.to_string() + " vs " + cc.second.to_string();
  return "";
}

inline CheckLine compare_elems(std::string name, const AlgElem& a, const AlgElem& b) {
  const bool ok = a == b;
  return {std::move(name), ok, false, ok ? "" : first_word_difference(a, b)};
}

}  // namespace detail

// Mutual comparison of every route. Operators are held at most two at a
// time so n = 4 stays within a few hundred megabytes. Above
// kFullOperatorMaxN only the identity column of each path is formed, so
// operator-level identities are reported as skipped.
inline CrossCheckReport cross_check(int n, bool include_full_matrix_info = true) {
  detail::check_n(n);
  CrossCheckReport rep;
  rep.n = n;
  const AlgElem thm = sdet_theorem(n);
  rep.values[Path::thm] = thm;

  auto guarded_extract = [&](Path p, const TOp& x) {
    try {
      rep.values[p] = extract_sdet(x);
      rep.lines.push_back({"alternating extraction [" + std::string(path_name(p)) + "]", true, false, ""});
    } catch (const ExtractionError& e) {
      rep.lines.push_back({"alternating extraction [" + std::string(path_name(p)) + "]", false, false, e.what()});
    }
  };

  if (n > kFullOperatorMaxN) {
    const TOp::Code id = detail::identity_code(n);
    for (Path p : {Path::def, Path::pi, Path::bp, Path::qa, Path::qb, Path::qc}) {
      const std::string name = "alternating extraction [" + std::string(path_name(p)) + "]";
      try {
        rep.values[p] = extract_sdet_column(n, path_column(n, p, id));
        rep.lines.push_back({name, true, false, "identity column only"});
      } catch (const ExtractionError& e) {
        rep.lines.push_back({name, false, false, e.what()});
      }
    }
    rep.lines.push_back({"operator identities bracket_pi == expand_*, A_n bracket == A_n bracket_pi", false, false,
                         "needs full operators, n > " + std::to_string(kFullOperatorMaxN), true});
  } else {
    const TOp pi = bracket_pi(n);
    guarded_extract(Path::pi, pi);
    for (Path p : {Path::bp, Path::qa, Path::qb, Path::qc}) {
      const TOp x = path_operator(n, p);
      rep.lines.push_back(detail::compare_ops("bracket_pi == expand_" + std::string(path_name(p)), pi, x));
      guarded_extract(p, x);
    }
    {
      const TOp def = bracket(n, n);
      guarded_extract(Path::def, def);
      const TOp a = antisym_full(n);
      const TOp a_pi = a * pi;
      rep.lines.push_back(detail::compare_ops("A_n bracket == A_n bracket_pi", a * def, a_pi));
      if (include_full_matrix_info && n <= 3 && rep.values.count(Path::pi)) {
        TOp rhs(n);
        const AlgElem& s = rep.values[Path::pi];
        for (TOp::Code c = 0; c < a.dim(); ++c)
          for (const auto& [r, v] : a.column(c)) {
            AlgElem e;
            e.add_product(s, v);
            rhs.add(r, c, e);
          }
        auto diff = first_difference(a_pi, rhs);
        rep.lines.push_back({"full matrix A_n bracket_pi == sdet A_n", !diff, true, ""});
      }
    }
  }
  for (Path p : {Path::def, Path::pi, Path::bp, Path::qa, Path::qb, Path::qc}) {
    auto it = rep.values.find(p);
    if (it == rep.values.end()) continue;
    rep.lines.push_back(detail::compare_elems("sdet[" + std::string(path_name(p)) + "] == sdet[thm]", it->second, thm));
  }
  rep.lines.push_back({"word shape of sdet[thm]", has_sdet_word_shape(thm, n), false, ""});
  return rep;
}

// ---------------------------------------------------------------------------
// Specialization b_p^q -> delta_pq eps_p and the series form.

// eps_i = 1 for i <= n - l, -1 otherwise.
inline std::vector<int> epsilon(int n, int l) {
  if (l < 0 || l > n) throw RangeError("l must be in 0..n");
  std::vector<int> e(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) e[i - 1] = i <= n - l ? 1 : -1;
  return e;
}

inline RatFunc specialize_diag(const AlgElem& s, int n, int l) {
  const std::vector<int> eps = epsilon(n, l);
  RatFunc acc;
  for (const auto& [w, c] : s.terms()) {
    int v = 1;
    for (const GenSym& g : w) {
      if (g.p != g.q || g.p < 1 || g.p > n) {
        v = 0;
        break;
      }
      v *= eps[g.p - 1];
    }
    if (v != 0) acc += v > 0 ? c : -c;
  }
  return acc;
}

// Limit of specialize_diag as u -> infinity.
inline Rational leading(const AlgElem& s, int n, int l) { return rf_limit_at_infinity(specialize_diag(s, n, l)); }

inline SeriesElem series_coeffs(const AlgElem& s, int n, int order) { return expand_series(s, n, order); }

// Coefficient of t^r after b_pq^(0) -> delta_pq eps_p. Higher modes stay
// symbolic, so only r = 0 is guaranteed to reduce to a number; other
// coefficients throw if a higher mode survives.
inline Rational specialize_series_coeff(const SeriesElem& e, int n, int l, int r = 0) {
  const std::vector<int> eps = epsilon(n, l);
  return evaluate_modes(e.coeff(r), [&](const SeriesGen& g) -> Rational {
    if (g.r != 0) throw RangeError("mode b^(" + std::to_string(g.r) + ") has no numeric specialization");
    return g.p == g.q ? Rational(eps[g.p - 1]) : Rational(0);
  });
}

}  // namespace sdet
