#include <gtest/gtest.h>

#include "sdet/tensorop.hpp"

using namespace sdet;

namespace {

RatFunc inv_lin(long a, long b) { return RatFunc(UPoly::constant(1), UPoly::linear(a, b)); }
AlgElem b(int p, int q, int s = 0) { return AlgElem::generator(p, q, s); }

// Dense 0/1 matrix of a slot permutation, built from the definition
// e_{c_1} x ... x e_{c_n} -> e at slot pi(i) equal to c_i.
std::vector<std::vector<int>> dense_perm(const Perm& pi) {
  const int n = pi.size();
  int dim = 1;
  for (int i = 0; i < n; ++i) dim *= n;
  std::vector<std::vector<int>> m(dim, std::vector<int>(dim, 0));
  for (int c = 0; c < dim; ++c) {
    std::vector<int> digits(n);
    int x = c;
    for (int s = n - 1; s >= 0; --s) {
      digits[s] = x % n;
      x /= n;
    }
    std::vector<int> out(n);
    for (int i = 1; i <= n; ++i) out[pi(i) - 1] = digits[i - 1];
    int r = 0;
    for (int s = 0; s < n; ++s) r = r * n + out[s];
    m[r][c] = 1;
  }
  return m;
}

std::vector<std::vector<int>> dense_mul(const std::vector<std::vector<int>>& a,
                                        const std::vector<std::vector<int>>& b) {
  const std::size_t d = a.size();
  std::vector<std::vector<int>> m(d, std::vector<int>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < d; ++j) m[i][j] += a[i][k] * b[k][j];
  return m;
}

std::vector<std::vector<int>> to_dense(const TOp& op) {
  std::vector<std::vector<int>> m(op.dim(), std::vector<int>(op.dim(), 0));
  for (TOp::Code c = 0; c < op.dim(); ++c)
    for (const auto& [r, v] : op.column(c)) {
      EXPECT_TRUE(v.is_scalar() && v.scalar_part().is_constant());
      m[r][c] = static_cast<int>(v.scalar_part().constant_value().get_num().get_si());
    }
  return m;
}

TOp power_of_slots(int n, const std::vector<std::pair<int, int>>& ps) {
  TOp x = TOp::identity(n);
  for (auto [i, j] : ps) x = x * P(n, i, j);
  return x;
}

}  // namespace

TEST(Permutations, SwapActsOnBasisVectors) {
  EXPECT_EQ(t_apply(P(2, 1, 2), {1, 2}), (std::map<MultiIdx, AlgElem>{{{2, 1}, AlgElem(1)}}));
  EXPECT_EQ(P(3, 2, 2), TOp::identity(3));
  for (int n = 2; n <= 4; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) EXPECT_EQ(P(n, i, j) * P(n, i, j), TOp::identity(n));
  EXPECT_THROW(P(2, 0, 1), RangeError);
  EXPECT_THROW(P(2, 1, 3), RangeError);
}

TEST(Permutations, HomomorphismAgainstDenseMatrices) {
  const auto all = all_perms(3);
  for (const Perm& s : all) {
    EXPECT_EQ(to_dense(perm_op(s)), dense_perm(s));
    for (const Perm& t : all) {
      EXPECT_EQ(perm_op(s) * perm_op(t), perm_op(s * t));
      EXPECT_EQ(dense_mul(dense_perm(s), dense_perm(t)), dense_perm(s * t));
    }
  }
}

TEST(Permutations, SparsityIsOneEntryPerColumn) {
  for (int n = 1; n <= 4; ++n)
    for (const Perm& s : {Perm::identity(n), Perm::transposition(n, 1, n)})
      EXPECT_EQ(perm_op(s).nnz(), static_cast<std::size_t>(perm_op(s).dim()));
}

TEST(YangMatrix, EntriesOfIdMinusPOverU) {
  const TOp r = R_op(2, 1, 2, UPoly::u());
  EXPECT_EQ(r.entry({1, 2}, {1, 2}), AlgElem(1));
  EXPECT_EQ(r.entry({2, 1}, {1, 2}), AlgElem(-RatFunc(UPoly{1}, UPoly::u())));
  EXPECT_EQ(r.entry({1, 1}, {1, 1}), AlgElem(RatFunc(1) - RatFunc(UPoly{1}, UPoly::u())));
}

TEST(YangMatrix, AbbreviatedArgument) {
  const TOp expected = TOp::identity(2) - P(2, 1, 2) * inv_lin(2, -1);
  EXPECT_EQ(R_op(2, 1, 2, UPoly::linear(2, 2 - 1 - 2)), expected);
}

TEST(YangMatrix, ProductWithNegatedArgument) {
  for (const UPoly& arg : {UPoly::u(), UPoly::linear(2, -1), UPoly::linear(2, -5)}) {
    const RatFunc a(arg);
    const TOp lhs = R_op(3, 1, 3, arg) * R_op(3, 1, 3, -arg);
    EXPECT_EQ(lhs, TOp::identity(3) * (RatFunc(1) - (a * a).inverse()));
  }
  EXPECT_THROW(R_op(2, 1, 2, UPoly{}), DivisionByZero);
}

TEST(Antisymmetrizer, Basics) {
  EXPECT_EQ(antisym_first(3, 1), TOp::identity(3));
  EXPECT_EQ(antisym_first(3, 0), TOp::identity(3));
  EXPECT_EQ(antisym_last(3, 0), TOp::identity(3));
  for (int n = 1; n <= 4; ++n) {
    MultiIdx id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 1);
    const auto col = t_apply(antisym_full(n), id);
    long fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    EXPECT_EQ(static_cast<long>(col.size()), fact);
    for (const auto& [idx, v] : col) EXPECT_TRUE(v == AlgElem(1) || v == AlgElem(-1));
  }
  EXPECT_THROW(antisym_first(3, 4), RangeError);
  EXPECT_THROW(antisym_last(3, -1), RangeError);
}

TEST(Antisymmetrizer, FactorialRecursion) {
  const int n = 4;
  for (int m = 2; m <= 4; ++m) {
    long f = 1;
    for (int i = 2; i < m; ++i) f *= i;
    EXPECT_EQ(antisym_last(n, m) * RatFunc(f), antisym_last(n, m) * antisym_last(n, m - 1)) << m;
  }
}

TEST(Antisymmetrizer, AlternatingRows) {
  for (int n = 1; n <= 3; ++n) {
    const TOp a = antisym_full(n);
    const TOp m = a * (B_slot(n, 1, 0) * R_op(n, 1, n, UPoly::linear(2, -1)));
    for (const Perm& s : all_perms(n)) {
      const TOp lhs = perm_op(s) * m;
      EXPECT_EQ(lhs, m * RatFunc(s.sign()));
    }
  }
}

TEST(PiOperator, Examples) {
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(Pi_k(n, n), TOp::identity(n));
  EXPECT_EQ(Pi_k(2, 1), TOp::identity(2) - P(2, 1, 2) * inv_lin(2, -1));
  EXPECT_THROW(Pi_k(3, 4), RangeError);
}

TEST(PiOperator, ReplacesRStringUnderTrailingAntisymmetrizer) {
  for (int n = 3; n <= 4; ++n)
    for (int k = 1; k <= n; ++k) {
      TOp rs = TOp::identity(n);
      for (int j = k + 1; j <= n; ++j) rs = rs * R_op(n, k, j, UPoly::linear(2, 2 - k - j));
      const TOp a = antisym_last(n, n - k);
      EXPECT_EQ(a * rs, a * Pi_k(n, k)) << n << "," << k;
      EXPECT_EQ(a * Pi_k(n, k), Pi_k(n, k) * a) << n << "," << k;
    }
}

TEST(PermutationIdentities, TrailingAntisymmetrizerAbsorbsTranspositionStrings) {
  for (int n = 2; n <= 4; ++n)
    for (int k = 1; k < n; ++k) {
      const TOp a = antisym_last(n, n - k);
      // Every increasing sequence k < i_1 < ... < i_m <= n.
      for (unsigned mask = 1; mask < (1u << (n - k)); ++mask) {
        std::vector<std::pair<int, int>> seq;
        for (int b = 0; b < n - k; ++b)
          if (mask & (1u << b)) seq.emplace_back(k, k + 1 + b);
        const int m = static_cast<int>(seq.size());
        EXPECT_EQ(a * power_of_slots(n, seq), a * P(n, k, seq.front().second) * RatFunc(m % 2 ? 1 : -1));
      }
    }
}

TEST(PermutationIdentities, TranspositionCommutesWithSymmetricPair) {
  for (int n = 3; n <= 4; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          if (i == j || j == k || i == k) continue;
          const TOp s = P(n, k, i) + P(n, k, j);
          EXPECT_EQ(P(n, i, j) * s, s * P(n, i, j));
        }
}

TEST(GeneratingMatrix, Embedding) {
  const TOp b1 = B_slot(1, 1, 0);
  EXPECT_EQ(b1.entry({1}, {1}), b(1, 1));
  const TOp b2 = B_slot(2, 1, 3);
  EXPECT_EQ(b2.entry({2, 1}, {1, 1}), b(2, 1, 3));
  EXPECT_EQ(b2.entry({2, 2}, {1, 1}), AlgElem());
  EXPECT_EQ(b2.nnz(), 8u);
  EXPECT_THROW(B_slot(2, 3, 0), RangeError);
  EXPECT_THROW(B_slot(2, 1, -1), RangeError);
}

TEST(GeneratingMatrix, SwapConjugatesSlots) {
  for (int n = 2; n <= 3; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int a = 0; a <= 1; ++a) EXPECT_EQ(P(n, i, j) * B_slot(n, i, a), B_slot(n, j, a) * P(n, i, j));
}

TEST(GeneratingMatrix, CommutesWithAntisymmetrizerOnLaterSlots) {
  const int n = 4;
  for (int m = 1; m <= n; ++m)
    for (int i = 1; i <= m; ++i) {
      const TOp a = antisym_last(n, n - m);
      EXPECT_EQ(a * B_slot(n, i, i - 1), B_slot(n, i, i - 1) * a) << m << "," << i;
    }
}

TEST(Products, IdentityAndSlotProduct) {
  const TOp x = B_slot(2, 1, 0) * B_slot(2, 2, 1);
  EXPECT_EQ(TOp::identity(2) * x, x);
  EXPECT_EQ(x * TOp::identity(2), x);
  EXPECT_EQ(t_mul(B_slot(2, 1, 0), B_slot(2, 2, 1)).entry({1, 2}, {1, 2}), b(1, 1) * b(2, 2, 1));
  EXPECT_THROW(TOp(2) * TOp(3), RangeError);
}

TEST(Products, ApplyEqualsColumnOfProduct) {
  const TOp x = B_slot(3, 1, 0) * R_op(3, 1, 2, UPoly::linear(2, -1)), y = B_slot(3, 2, 1);
  const TOp xy = x * y;
  for (TOp::Code c = 0; c < xy.dim(); ++c) EXPECT_EQ(x.apply(y.column(c)), xy.column(c)) << c;
  EXPECT_TRUE(x.apply({}).empty());
}

TEST(Products, SparsityBound) {
  for (int n = 2; n <= 3; ++n) {
    std::size_t bound = 1;
    for (int i = 0; i < n; ++i) bound *= static_cast<std::size_t>(n);
    TOp x = perm_op(Perm::transposition(n, 1, 2));
    for (int k = 1; k <= n; ++k) {
      x = x * B_slot(n, k, k - 1) * perm_op(Perm::transposition(n, 1, n));
      bound *= static_cast<std::size_t>(n);
      EXPECT_LE(x.nnz(), bound);
    }
  }
}

TEST(Debugging, DumpAndFirstDifference) {
  const TOp p = P(2, 1, 2);
  EXPECT_EQ(p.dump(), "(1,1) -> (1,1) : (1)\n(1,2) -> (2,1) : (1)\n(2,1) -> (1,2) : (1)\n(2,2) -> (2,2) : (1)\n");
  EXPECT_FALSE(first_difference(p, p));
  const auto d = first_difference(p, TOp::identity(2));
  ASSERT_TRUE(d);
  EXPECT_NE(d->find("(1,2)"), std::string::npos);
  EXPECT_THROW(TOp(0), RangeError);
  EXPECT_THROW(p.encode({1, 3}), RangeError);
}
