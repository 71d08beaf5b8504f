#include "superdenom/denominator.hpp"

#include "cases.hpp"
#include "identity_oracle.hpp"

#include <gtest/gtest.h>

using namespace superdenom;

namespace {

oracle::Poly poly(const TruncatedSeries& t) {
  oracle::Poly p;
  for (const auto& [o, c] : t.terms()) p[oracle::Vec(o.c.begin(), o.c.begin() + t.rank())] = c;
  return p;
}

// prod over odd e <= n of (1 + s q^e)^x, by convolution in one variable.
QSeries q_product(int s, long x, int first, int n) {
  oracle::Poly p{{{0}, 1}};
  for (int e = first; e <= n; e += 2) p = oracle::times(p, oracle::binomial_factor({e}, s, x, n), n);
  QSeries out(n + 1, Rational(0));
  for (const auto& [v, c] : p) out[v[0]] = c;
  return out;
}

AlgebraSpec spec_of(const cases::Case& c) { return build_spec(c.family, c.k, c.l); }

}  // namespace

TEST(Fq, OneForNonzeroDualCoxeter) {
  auto f = f_q(build_spec(Family::G3, 0, 0), 5);
  EXPECT_EQ(f, (QSeries{1, 0, 0, 0, 0, 0}));
}

TEST(Fq, CorrectedProductsAgainstConvolution) {
  EXPECT_EQ(f_q(build_spec(Family::A_2km1_2km1, 2, 0), 9), q_product(-1, -2, 1, 9));
  EXPECT_EQ(f_q(build_spec(Family::A_2k_2k_4, 2, 0), 9), q_product(1, -1, 1, 9));
  EXPECT_EQ(f_q(build_spec(Family::D_kp1_k, 2, 0), 9), q_product(-1, 1, 1, 9));
}

TEST(Fq, ExponentsFromThreeOnward) {
  auto a = f_q(build_spec(Family::A_2km1_2km1, 2, 0), 4, FVariant::Printed);
  EXPECT_EQ(a, (QSeries{1, 0, 0, 2, 0}));
  auto d = f_q(build_spec(Family::D_kp1_k, 2, 0), 4, FVariant::Printed);
  EXPECT_EQ(d, (QSeries{1, 0, 0, -1, 0}));
  EXPECT_EQ(f_q(build_spec(Family::A_2k_2k_4, 2, 0), 8, FVariant::Printed), q_product(1, -1, 3, 8));
}

TEST(Fq, ReciprocalInverts) {
  auto f = f_q(build_spec(Family::A_2k_2k_4, 2, 0), 7);
  auto g = reciprocal(f);
  auto prod = oracle::times(
      [&] {
        oracle::Poly p;
        for (std::size_t i = 0; i < f.size(); ++i) if (f[i] != 0) p[{long(i)}] = f[i];
        return p;
      }(),
      [&] {
        oracle::Poly p;
        for (std::size_t i = 0; i < g.size(); ++i) if (g[i] != 0) p[{long(i)}] = g[i];
        return p;
      }(),
      7);
  EXPECT_EQ(prod, (oracle::Poly{{{0}, 1}}));
}

TEST(Lhs, LeadingCoefficients) {
  for (const auto& c : cases::all_small()) {
    auto s = spec_of(c);
    auto w = make_window(s, 2);
    auto lhs = build_lhs(s, w);
    EXPECT_EQ(lhs.coefficient(s.rho_hat), Rational(1)) << s.name();
    for (const auto& b : s.simple_roots) EXPECT_EQ(lhs.coefficient(s.rho_hat - b), Rational(-1)) << s.name();
  }
}

TEST(Identity, SmallestDiagonalFamilyAgainstDenseExpansion) {
  auto s = build_spec(Family::D_kp1_k, 1, 0);
  auto w = make_window(s, 6);
  auto lhs = build_lhs(s, w);
  auto rhs = build_rhs_translation_sum(s, w).series;
  auto olhs = oracle::affine_lhs(s, 6);
  auto orhs = oracle::affine_translation_sum(s, 6, 6);
  EXPECT_EQ(orhs, oracle::affine_translation_sum(s, 6, 9));
  EXPECT_EQ(poly(lhs), olhs);
  EXPECT_EQ(poly(rhs), orhs);
  EXPECT_EQ(olhs, orhs);
  EXPECT_TRUE(compare(lhs, rhs).empty());
}

TEST(Identity, OracleAgreesOnMoreFamilies) {
  for (auto c : {cases::Case{Family::A_2k_2lm1, 1, 1}, {Family::A_2km1_2lm1, 2, 1}, {Family::D_kp1_l, 2, 1},
                 {Family::A_2k_2k_4, 1, 0}}) {
    auto s = spec_of(c);
    const int D = 5;
    auto w = make_window(s, D);
    auto o = oracle::affine_translation_sum(s, D, 5);
    EXPECT_EQ(poly(build_lhs(s, w)), oracle::affine_lhs(s, D)) << s.name();
    EXPECT_EQ(poly(build_rhs_translation_sum(s, w).series), o) << s.name();
    EXPECT_EQ(oracle::affine_lhs(s, D), o) << s.name();
  }
}

TEST(Identity, G3AtDepthFive) {
  auto r = verify(build_spec(Family::G3, 0, 0), 5);
  EXPECT_EQ(r.status, "match");
  EXPECT_TRUE(r.mismatches.empty());
  EXPECT_TRUE(r.checks.at("rho_hat_coefficient").pass);
}

TEST(Identity, QuarticDiagonalIncludesTheCubicTerm) {
  auto s = build_spec(Family::A_2k_2k_4, 2, 0);
  const int hd = make_window(s, 1).delta_height;
  auto r = verify(s, 3 * hd + 1);
  EXPECT_EQ(r.status, "match");
  EXPECT_GE(r.q_depth, 3);

  VerifyOptions bad;
  bad.rhs.f_override = std::pair{3, Rational(0)};
  bad.isotropic = bad.ratio = false;
  auto m = verify(s, 3 * hd + 1, bad);
  EXPECT_EQ(m.status, "mismatch");
  EXPECT_FALSE(m.mismatches.empty());
}

TEST(Isotropic, AgreesWithTranslationSum) {
  for (auto c : {cases::Case{Family::G3, 0, 0}, {Family::A_2km1_2lm1, 2, 1}, {Family::D_kp1_k, 2, 0}}) {
    auto s = spec_of(c);
    auto w = make_window(s, 4);
    auto t = build_rhs_translation_sum(s, w).series;
    auto i = build_rhs_isotropic_sum(s, w).series;
    EXPECT_TRUE(compare(t, i).empty()) << s.name();
    EXPECT_EQ(i.max_support().size(), 1u);
  }
}

TEST(Isotropic, UnsupportedForOddDiagonal) {
  auto s = build_spec(Family::A_2km1_2km1, 2, 0);
  EXPECT_THROW(build_rhs_isotropic_sum(s, make_window(s, 4)), UnsupportedForm);
  auto r = verify(s, 4);
  EXPECT_TRUE(r.checks.at("isotropic_sum").pass);
  EXPECT_EQ(r.checks.at("isotropic_sum").detail.rfind("unsupported", 0), 0u);
}

TEST(Casimir, SupportLiesOnTheShell) {
  auto s = build_spec(Family::A_2k_2lm1, 1, 1);
  auto w = make_window(s, 4);
  auto lhs = build_lhs(s, w);
  EXPECT_TRUE(casimir_support_check(s, {&lhs}).pass);
  // rho_hat - a is on the shell for every simple root a; rho_hat - 2a is not when (a,a) != 0
  Weight a;
  for (const auto& r : s.simple_roots)
    if (s.form(r, r) != 0) a = r;
  Weight off = s.rho_hat - 2 * a;
  ASSERT_NE(s.form(off, off), s.form(s.rho_hat, s.rho_hat));
  auto bad = lhs;
  bad += TruncatedSeries::monomial(s.basis, w.anchor, w.H, off, 5);
  EXPECT_FALSE(casimir_support_check(s, {&lhs, &bad}).pass);
}

TEST(Ratio, DiagonalFamiliesGiveTheReciprocalOfF) {
  for (const auto& c : cases::zero_hdual()) {
    auto s = spec_of(c);
    auto r = ratio_invariant(s, 12);
    EXPECT_TRUE(r.check.pass) << s.name() << ": " << r.check.detail;
    EXPECT_TRUE(r.escaping.empty());
    ASSERT_FALSE(r.quotient.empty());
    EXPECT_EQ(r.quotient[0], 1);
    EXPECT_EQ(r.quotient, reciprocal(f_q(s, static_cast<int>(r.quotient.size()) - 1)));
  }
  EXPECT_THROW(ratio_invariant(build_spec(Family::G3, 0, 0), 4), UnsupportedForm);
}

TEST(FiniteIdentity, MatchesDenseExpansion) {
  for (auto c : {cases::Case{Family::A_2km1_2lm1, 2, 1}, {Family::A_2k_2lm1, 1, 1}}) {
    auto s = spec_of(c);
    auto f = finite_identity_check(s, 6);
    auto o = oracle::finite_identity(s, level0_even_roots(s, s.sharp), 6);
    EXPECT_TRUE(f.check.pass) << f.check.detail;
    EXPECT_EQ(poly(f.lhs), o.lhs) << s.name();
    EXPECT_EQ(poly(f.rhs), o.rhs) << s.name();
    EXPECT_EQ(o.lhs, o.rhs);
    EXPECT_EQ(f.group_order, o.order);
    EXPECT_EQ(f.lhs.coefficient(s.rho), Rational(1));
    EXPECT_EQ(f.rhs.coefficient(s.rho), Rational(1));
  }
}

TEST(RootCounts, StepThreeValues) {
  for (int k : {2, 3})
    for (auto f : {Family::A_2km1_2km1, Family::A_2k_2k_4, Family::D_kp1_k}) {
      auto r = root_count_report(build_spec(f, k, 0));
      EXPECT_TRUE(r.pass) << r.detail;
    }
  auto q = build_spec(Family::A_2k_2k_4, 2, 0);
  auto counts = class_counts(q);
  EXPECT_EQ((counts.at({1, Parity::Odd})), 4);
  EXPECT_EQ((counts.at({3, Parity::Odd})), 4);
  EXPECT_EQ((class_counts(build_spec(Family::D_kp1_k, 2, 0)).at({0, Parity::Even})), 16);
}

TEST(RootCounts, BookkeepingForAllSmallCases) {
  for (const auto& c : cases::all_small()) {
    auto r = root_count_report(spec_of(c));
    EXPECT_TRUE(r.pass) << r.detail;
  }
}

TEST(NegativeControls, DroppedOrFlippedElementsAreCaught) {
  auto s = build_spec(Family::D_kp1_l, 2, 1);
  auto w = make_window(s, 8);
  auto lhs = build_lhs(s, w);
  auto full = build_rhs_translation_sum(s, w);
  ASSERT_TRUE(compare(lhs, full.series).empty());
  for (std::size_t i = 0; i < full.elements.size(); ++i) {
    RhsOptions drop, flip;
    drop.drop_element = i;
    flip.flip_sign = i;
    EXPECT_FALSE(compare(lhs, build_rhs_translation_sum(s, w, drop).series).empty()) << i;
    EXPECT_FALSE(compare(lhs, build_rhs_translation_sum(s, w, flip).series).empty()) << i;
  }
}

TEST(Parallel, SameSeriesAsSerial) {
  for (const auto& c : cases::all_small()) {
    auto s = spec_of(c);
    auto w = make_window(s, 6);
    RhsOptions a, b;
    a.exec = Exec::Serial;
    b.exec = Exec::Parallel;
    EXPECT_EQ(build_rhs_translation_sum(s, w, a).series, build_rhs_translation_sum(s, w, b).series) << s.name();
    EXPECT_EQ(build_lhs(s, w, Exec::Serial), build_lhs(s, w, Exec::Parallel)) << s.name();
  }
}

TEST(Report, StatusFollowsMismatchesAndChecks) {
  auto r = verify(build_spec(Family::C_lp1, 0, 1), 4);
  EXPECT_EQ(r.status, "match");
  for (const char* name : {"enumeration", "rho_hat_coefficient", "casimir", "isotropic_sum"})
    EXPECT_TRUE(r.checks.count(name)) << name;
  EXPECT_FALSE(r.checks.count("ratio"));
  EXPECT_EQ(r.lhs_terms, r.rhs_terms);
}

TEST(MulQ, StepsByTheImaginaryPeriod) {
  auto s = build_spec(Family::G3, 0, 0);
  auto w = make_window(s, 8);
  auto one = TruncatedSeries::monomial(s.basis, w.anchor, w.H, s.rho_hat, 1);
  auto m = mul_q(one, QSeries{1, 0, 3}, Weight::delta(), s.imaginary_period);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.coefficient(s.rho_hat - Weight::delta(2)), Rational(3));
  EXPECT_THROW(mul_q(one, QSeries{1, 1}, Weight::delta(), s.imaginary_period), UnsupportedForm);
  EXPECT_THROW(mul_q(one, QSeries{1, 1}, Weight::delta()), StructuralError);
}
