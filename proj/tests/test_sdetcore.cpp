#include <gtest/gtest.h>

#include "oracle.hpp"
#include "sdet/emit.hpp"
#include "sdet/sdetcore.hpp"

using namespace sdet;

namespace {

// b^{col}_{row}(u - shift), upper index first as in the bracket notation.
AlgElem bb(int col, int row, int shift) { return AlgElem::generator(row, col, shift); }
RatFunc inv_lin(long a, long b) { return RatFunc(UPoly::constant(1), UPoly::linear(a, b)); }
IdxTuple T(std::vector<int> k) { return IdxTuple(std::move(k)); }

AlgElem two_by_two_formula() {
  return bb(1, 1, 0) * bb(2, 2, 1) - bb(1, 2, 0) * bb(2, 1, 1) * (RatFunc(UPoly::linear(2, -2)) * inv_lin(2, -1)) +
         bb(2, 2, 0) * bb(2, 2, 1) * inv_lin(2, -1);
}

// Per-tuple contributions printed for n = 3, with the summation indices
// written out.
std::map<IdxTuple, AlgElem> three_by_three_contributions() {
  std::map<IdxTuple, AlgElem> c;
  const RatFunc a = inv_lin(2, -2), b = inv_lin(2, -3);
  AlgElem e123;
  for (const Perm& s : all_perms(3))
    e123 += bb(1, s(1), 0) * bb(2, s(2), 1) * bb(3, s(3), 2) * RatFunc(s.sign());
  c[T({1, 2, 3})] = e123;
  AlgElem e223, e323, e133, e233, e333;
  for (int s = 1; s <= 3; ++s) {
    e223 += bb(s, 2, 0) * bb(2, s, 1) * bb(3, 3, 2) - bb(s, 3, 0) * bb(2, s, 1) * bb(3, 2, 2);
    e323 += bb(s, 3, 0) * bb(2, 2, 1) * bb(3, s, 2) - bb(s, 2, 0) * bb(2, 3, 1) * bb(3, s, 2);
    e133 += bb(1, 1, 0) * bb(s, 3, 1) * bb(3, s, 2) - bb(1, 3, 0) * bb(s, 1, 1) * bb(3, s, 2);
    e233 += bb(2, 2, 0) * bb(s, 3, 1) * bb(3, s, 2) - bb(2, 3, 0) * bb(s, 2, 1) * bb(3, s, 2);
    for (int t = 1; t <= 3; ++t) e333 += bb(s, 3, 0) * bb(t, s, 1) * bb(3, t, 2);
  }
  c[T({2, 2, 3})] = e223 * a;
  c[T({3, 2, 3})] = e323 * a;
  c[T({1, 3, 3})] = e133 * b;
  c[T({2, 3, 3})] = e233 * (a * b);
  c[T({3, 3, 3})] = e333 * (a * b);
  return c;
}

}  // namespace

TEST(Paths, NamesRoundTrip) {
  for (Path p : kAllPaths) EXPECT_EQ(parse_path(path_name(p)), p);
  EXPECT_FALSE(parse_path("all"));
  EXPECT_FALSE(parse_path("DEF"));
}

TEST(Bracket, SingleFactorHasNoRMatrices) {
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(bracket(n, 1), B_slot(n, 1, 0));
}

TEST(Bracket, TwoByTwo) {
  EXPECT_EQ(bracket(2, 2), B_slot(2, 1, 0) * R_op(2, 1, 2, UPoly::linear(2, -1)) * B_slot(2, 2, 1));
  EXPECT_THROW(bracket(2, 3), RangeError);
}

TEST(Bracket, PiFormSmallCases) {
  const TOp one = bracket_pi(1);
  EXPECT_EQ(one.entry({1}, {1}), bb(1, 1, 0));
  EXPECT_EQ(one.nnz(), 1u);
  EXPECT_EQ(bracket_pi(2), B_slot(2, 1, 0) * (TOp::identity(2) - P(2, 1, 2) * inv_lin(2, -1)) * B_slot(2, 2, 1));
}

TEST(Expansions, AgreeWithPiFormUpToThree) {
  for (int n = 1; n <= 3; ++n) {
    const TOp pi = bracket_pi(n);
    for (Path p : {Path::bp, Path::qa, Path::qb, Path::qc}) {
      const TOp x = path_operator(n, p);
      EXPECT_FALSE(first_difference(pi, x)) << path_name(p) << " n=" << n << ": " << *first_difference(pi, x);
    }
  }
  EXPECT_THROW(path_operator(2, Path::thm), RangeError);
}

TEST(Expansions, SingleTermForOneSlot) {
  for (Path p : {Path::bp, Path::qa, Path::qb, Path::qc}) EXPECT_EQ(path_operator(1, p), B_slot(1, 1, 0));
}

TEST(Expansions, ReorderedTermMatchesPrintedContribution) {
  // The eta = (2,2) term of the reordered expansion for n = 2.
  const IdxTuple eta = T({2, 2});
  const TOp term = perm_op(p_eta(eta).inverse()) * B_slot(2, 2, 0) * B_slot(2, 2, 1) * alpha_kappa(eta);
  EXPECT_EQ(alpha_kappa(eta), inv_lin(-2, 1));
  EXPECT_EQ(extract_sdet(term), (bb(1, 2, 0) * bb(2, 1, 1) + bb(2, 2, 0) * bb(2, 2, 1)) * inv_lin(2, -1));
}

TEST(Antisymmetrized, DefinitionAndPiFormAgree) {
  for (int n = 2; n <= 3; ++n) {
    const TOp a = antisym_full(n);
    EXPECT_EQ(a * bracket(n, n), a * bracket_pi(n)) << n;
  }
}

TEST(Extraction, IdentityGivesOne) { EXPECT_EQ(extract_sdet(TOp::identity(2)), AlgElem(1)); }

TEST(Extraction, ZeroOperatorGivesZero) { EXPECT_TRUE(extract_sdet(TOp(3)).is_zero()); }

TEST(Extraction, TwoByTwoPiForm) { EXPECT_EQ(extract_sdet(bracket_pi(2)), two_by_two_formula()); }

TEST(Extraction, DefinitionEqualsPiFormAtThree) { EXPECT_EQ(extract_sdet(bracket(3, 3)), extract_sdet(bracket_pi(3))); }

TEST(Extraction, MatchesVectorOracle) {
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(compute_sdet(n, Path::def).value, oracle::sdet_by_vector(n)) << n;
}

TEST(ColumnMode, MatchesFullOperatorUpToFour) {
  for (int n = 1; n <= 4; ++n) {
    const TOp::Code id = detail::identity_code(n);
    for (Path p : {Path::def, Path::pi, Path::bp, Path::qa, Path::qb, Path::qc}) {
      const TOp x = path_operator(n, p);
      EXPECT_EQ(path_column(n, p, id), x.column(id)) << path_name(p) << " n=" << n;
      EXPECT_EQ(extract_sdet_column(n, path_column(n, p, id)), extract_sdet(x)) << path_name(p) << " n=" << n;
    }
  }
}

TEST(ColumnMode, OtherColumnsToo) {
  const TOp x = path_operator(3, Path::qc);
  for (TOp::Code c = 0; c < x.dim(); c += 5) EXPECT_EQ(path_column(3, Path::qc, c), x.column(c)) << c;
}

TEST(ColumnMode, SymmetricPartsAreKilled) {
  // e_1 x e_1 has code 0 and lies in the kernel of A_2.
  TOp::Column v{{detail::identity_code(2), AlgElem::generator(1, 1, 0)}, {0, AlgElem::generator(1, 2, 0)}};
  EXPECT_EQ(extract_sdet_column(2, v), AlgElem::generator(1, 1, 0));
  TOp::Column w{{detail::identity_code(2), AlgElem(1)}, {2, AlgElem(1)}};  // e_1 x e_2 + e_2 x e_1
  EXPECT_TRUE(extract_sdet_column(2, w).is_zero());
}

TEST(Theorem, SmallCases) {
  EXPECT_EQ(sdet_theorem(1), bb(1, 1, 0));
  EXPECT_EQ(sdet_theorem(2), two_by_two_formula());
  EXPECT_EQ(sdet_theorem(2), extract_sdet(bracket_pi(2)));
  const AlgElem s3 = sdet_theorem(3);
  EXPECT_EQ(s3.coeff(Word{{1, 1, 0}, {2, 2, 1}, {3, 3, 2}}), RatFunc(1));
  EXPECT_EQ(s3.coeff(Word{{2, 1, 0}, {1, 2, 1}, {3, 3, 2}}), -(RatFunc(UPoly::linear(2, -3)) * inv_lin(2, -2)));
  EXPECT_THROW(sdet_theorem(0), RangeError);
}

TEST(Theorem, PerTupleContributionsForTwo) {
  EXPECT_EQ(theorem_contribution(T({1, 2})), bb(1, 1, 0) * bb(2, 2, 1) - bb(1, 2, 0) * bb(2, 1, 1));
  EXPECT_EQ(theorem_contribution(T({2, 2})), (bb(1, 2, 0) * bb(2, 1, 1) + bb(2, 2, 0) * bb(2, 2, 1)) * inv_lin(2, -1));
}

TEST(Theorem, PerTupleContributionsForThree) {
  const auto printed = three_by_three_contributions();
  ASSERT_EQ(printed.size(), 6u);
  AlgElem total;
  for (const auto& [eta, value] : printed) {
    EXPECT_EQ(theorem_contribution(eta), value) << to_string(eta);
    total += value;
  }
  EXPECT_EQ(total, sdet_theorem(3));
}

TEST(Theorem, AllPathsAgreeUpToThree) {
  for (int n = 1; n <= 3; ++n) {
    const AlgElem ref = sdet_theorem(n);
    for (Path p : kAllPaths) EXPECT_EQ(compute_sdet(n, p).value, ref) << path_name(p) << " n=" << n;
  }
}

TEST(Theorem, WordShapeAndTermCounts) {
  for (int n = 1; n <= 4; ++n) EXPECT_TRUE(has_sdet_word_shape(sdet_theorem(n), n));
  EXPECT_EQ(sdet_theorem(2).size(), 3u);
  EXPECT_EQ(sdet_theorem(3).size(), read_golden(std::string(SDET_GOLDEN_DIR) + "/n3.golden").value.size());
  EXPECT_FALSE(has_sdet_word_shape(bb(1, 1, 1), 1));
  EXPECT_FALSE(has_sdet_word_shape(bb(1, 1, 0) * bb(2, 2, 1), 3));
}

TEST(CrossCheck, PassesUpToThree) {
  for (int n = 1; n <= 3; ++n) {
    const CrossCheckReport r = cross_check(n);
    EXPECT_TRUE(r.passed()) << r.to_text();
    EXPECT_EQ(r.values.size(), kAllPaths.size());
    const std::string text = r.to_text();
    EXPECT_EQ(text.find("[FAIL]"), std::string::npos);
    EXPECT_NE(text.find("[INFO] n=" + std::to_string(n) + " full matrix"), std::string::npos);
  }
}

TEST(CrossCheck, FiveUsesIdentityColumn) {
  const CrossCheckReport r = cross_check(5);
  EXPECT_TRUE(r.passed()) << r.to_text();
  EXPECT_EQ(r.values.size(), kAllPaths.size());
  EXPECT_NE(r.to_text().find("[SKIP] n=5 operator identities"), std::string::npos);
  EXPECT_EQ(r.values.at(Path::def), oracle::sdet_by_vector(5));
}

TEST(Specialization, TwoByTwo) {
  const AlgElem s = sdet_theorem(2);
  // l = 0 keeps b11 b22 and b22 b22: 1 + 1/(2u-1).
  EXPECT_EQ(specialize_diag(s, 2, 0), RatFunc(1) + inv_lin(2, -1));
  EXPECT_EQ(leading(s, 2, 0), Rational(1));
  EXPECT_EQ(leading(s, 2, 1), Rational(-1));
  EXPECT_EQ(leading(s, 2, 2), Rational(1));
  EXPECT_THROW(specialize_diag(s, 2, 3), RangeError);
  EXPECT_THROW(leading(bb(1, 1, 0) * RatFunc::u(), 1, 0), NotProperError);
}

TEST(Specialization, LeadingSignForThree) {
  const AlgElem s = sdet_theorem(3);
  for (int l = 0; l <= 3; ++l) EXPECT_EQ(leading(s, 3, l), Rational(l % 2 ? -1 : 1)) << l;
  EXPECT_EQ(epsilon(3, 1), (std::vector<int>{1, 1, -1}));
}

TEST(Series, SingleGenerator) {
  const SeriesElem e = series_coeffs(sdet_theorem(1), 1, 1);
  EXPECT_EQ(e.coeff(0), (SeriesCoeff{{{{1, 1, 0}}, Rational(1)}}));
  EXPECT_EQ(e.coeff(1), (SeriesCoeff{{{{1, 1, 1}}, Rational(1)}}));
}

TEST(Series, LeadingModeSpecialization) {
  const AlgElem s = sdet_theorem(2);
  EXPECT_EQ(specialize_series_coeff(series_coeffs(s, 2, 0), 2, 1), Rational(-1));
  EXPECT_THROW(specialize_series_coeff(series_coeffs(s, 2, 1), 2, 1, 1), RangeError);
}

TEST(Series, FirstCoefficientMatchesGoldenRoute) {
  const AlgElem golden = read_golden(std::string(SDET_GOLDEN_DIR) + "/n2.golden").value;
  const SeriesElem computed = series_coeffs(sdet_theorem(2), 2, 1);
  EXPECT_EQ(computed.coeff(1), expand_series(golden, 2, 1).coeff(1));
  EXPECT_FALSE(computed.coeff(1).empty());
}
