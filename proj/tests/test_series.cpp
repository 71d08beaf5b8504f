#include "superdenom/series.hpp"
#include "superdenom/algebra.hpp"

#include "oracle.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

using namespace superdenom;

namespace {

struct SeriesTest : ::testing::Test {
  AlgebraSpec s = build_spec(Family::A_2k_2lm1, 1, 1);
  const std::shared_ptr<const SimpleRootBasis>& B = s.basis;
  Weight lam = s.rho_hat;
  Weight a0 = s.simple_roots[0], a1 = s.simple_roots[1], a2 = s.simple_roots[2];

  oracle::Poly poly(const TruncatedSeries& t) {
    oracle::Poly p;
    for (const auto& [o, c] : t.terms()) p[oracle::Vec(o.c.begin(), o.c.begin() + t.rank())] = c;
    return p;
  }
  oracle::Vec dir(const Weight& w) { return oracle::to_vec(*B->decompose(w)); }
};

}  // namespace

TEST_F(SeriesTest, Unit) {
  auto u = TruncatedSeries::unit(B, lam, 3);
  EXPECT_EQ(u.coefficient(lam), Rational(1));
  EXPECT_EQ(u.coefficient(lam - a0), Rational(0));
  EXPECT_EQ(u.size(), 1u);
  EXPECT_EQ(u.max_support(), std::vector<Weight>{lam});
}

TEST_F(SeriesTest, OutsideWindowIsDistinguished) {
  auto u = TruncatedSeries::unit(B, lam, 2);
  EXPECT_FALSE(u.coefficient(lam - a0 - a1 - a2).has_value());
  EXPECT_FALSE(u.coefficient(lam + a0).has_value());
  EXPECT_FALSE(u.coefficient(lam - Rational(1, 2) * a0).has_value());
  EXPECT_TRUE(u.coefficient(lam - a0 - a1).has_value());
  EXPECT_THROW(TruncatedSeries::monomial(B, lam, 2, lam + a1), TruncationOverflow);
}

TEST_F(SeriesTest, InversePairCancels) {
  auto u = TruncatedSeries::unit(B, Weight(), 3);
  for (int sgn : {-1, 1}) {
    auto t = mul_factor(mul_factor(u, {a1, sgn, -1, 1}), {a1, sgn, 1, 1});
    EXPECT_EQ(t, u);
  }
}

TEST_F(SeriesTest, GeometricSeriesForAnOddFactor) {
  auto t = mul_factor(TruncatedSeries::unit(B, Weight(), 3), {a1, 1, -1, 1});
  EXPECT_EQ(t.size(), 4u);
  for (int j = 0; j <= 3; ++j) EXPECT_EQ(t.coefficient(-j * a1), Rational(j % 2 ? -1 : 1)) << j;
  EXPECT_EQ(poly(t), oracle::binomial_factor(dir(a1), 1, -1, 3));
  EXPECT_TRUE(t.truncated());
}

TEST_F(SeriesTest, NegativeRootFactorIsRenormalized) {
  // (1 - e^{a})^{-1} = -e^{-a} (1 - e^{-a})^{-1}
  Weight anchor = Weight();
  auto t = mul_factor(TruncatedSeries::unit(B, anchor, 2), {-a1, -1, -1, 1});
  oracle::Poly want;
  for (long j = 1; j <= 2; ++j) {
    oracle::Vec v = dir(a1);
    for (auto& x : v) x *= j;
    want[v] = -1;
  }
  EXPECT_EQ(poly(t), want);
  // The same product through the closed-form path.
  auto n = normalize(*B, anchor, {{-a1, -1, -1, 1}});
  EXPECT_EQ(n.top, -a1);
  EXPECT_EQ(n.coefficient, -1);
  EXPECT_EQ(expand(B, anchor, 2, n), t);
  // Shifting above the anchor is an error, never a silent loss.
  EXPECT_THROW(mul_factor(TruncatedSeries::unit(B, anchor, 2), {-a1, -1, 1, 1}), TruncationOverflow);
}

TEST_F(SeriesTest, ProductMatchesDenseConvolution) {
  auto a = TruncatedSeries::unit(B, lam, 4);
  a = mul_factor(a, {a0, -1, 1, 1});
  a = mul_factor(a, {a1 + a2, 1, -2, 1});
  auto b = mul_factor(TruncatedSeries::unit(B, Weight(), 4), {a2, -1, -1, 2});
  auto want = oracle::times(poly(a), poly(b), 4);
  auto ab = mul(a, b);
  EXPECT_EQ(poly(ab), want);
  EXPECT_EQ(ab.anchor(), lam);
  EXPECT_EQ(mul(a, TruncatedSeries::unit(B, Weight(), 4)), a);
  EXPECT_EQ(mul(a, b, Exec::Parallel), ab);
}

TEST_F(SeriesTest, MaxSupportIsTheAntichainOfMaximalWeights) {
  auto e = TruncatedSeries::unit(B, lam, 3);
  EXPECT_EQ(mul_factor(e, {a0, -1, 1, 1}).max_support(), std::vector<Weight>{lam});
  TruncatedSeries t(B, lam, 3);
  t += TruncatedSeries::monomial(B, lam, 3, lam - a0);
  t += TruncatedSeries::monomial(B, lam, 3, lam - a1);
  t += TruncatedSeries::monomial(B, lam, 3, lam - a0 - a1);
  auto m = t.max_support();
  std::sort(m.begin(), m.end());
  std::vector<Weight> want{lam - a0, lam - a1};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(m, want);
  EXPECT_THROW(TruncatedSeries(B, lam, 3).max_support(), std::invalid_argument);
}

TEST_F(SeriesTest, AddingAcrossWindowsIsRejected) {
  auto a = TruncatedSeries::unit(B, lam, 3);
  auto b = TruncatedSeries::unit(B, lam - a0, 3);
  EXPECT_THROW(a += b, StructuralError);
  EXPECT_THROW(a += TruncatedSeries::unit(B, lam, 2), StructuralError);
}

TEST_F(SeriesTest, DumpIsSortedAndStable) {
  auto t = mul_factor(TruncatedSeries::unit(B, lam, 2), {a0 + a1, -1, -1, 1});
  t = mul_factor(t, {a2, 1, 1, 1});
  std::string d = t.dump();
  EXPECT_EQ(d,
            "[0,0,0]\t1/1\n"
            "[0,0,1]\t1/1\n"
            "[1,1,0]\t1/1\n");
}

TEST_F(SeriesTest, TruncationCoherenceOnAProduct) {
  std::vector<FactorForm> fs{{a0, -1, 1, 1}, {a1, 1, -1, 1}, {a0 + a1 + a2, -1, 1, 1}, {a2, 1, -2, 1}};
  auto n = normalize(*B, lam, fs);
  auto big = expand(B, lam, 6, n);
  for (int h = 0; h < 6; ++h) EXPECT_EQ(big.restricted(h), expand(B, lam, h, n)) << h;
}

TEST_F(SeriesTest, SerialAndParallelExpansionAgree) {
  std::vector<FactorForm> fs;
  for (const auto& r : positive_roots(s, 2))
    fs.push_back({r.root, r.parity == Parity::Even ? -1 : 1, r.parity == Parity::Even ? 1 : -1, r.multiplicity});
  auto n = normalize(*B, lam, fs);
  EXPECT_EQ(expand(B, lam, 8, n, Exec::Serial), expand(B, lam, 8, n, Exec::Parallel));
}

TEST(SeriesProperties, RingAxiomsAgainstDenseOracle) {
  auto r = props::series_ring_axioms(2000, 11);
  EXPECT_TRUE(r.ok()) << r.failures << " failures; " << r.first_failure;
}

TEST(SeriesProperties, TruncationCoherence) {
  auto r = props::truncation_coherence(2000, 12);
  EXPECT_TRUE(r.ok()) << r.failures << " failures; " << r.first_failure;
}
