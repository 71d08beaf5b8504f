#include "superdenom/algebra.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace superdenom;

namespace {

Weight half(const Weight& w) { return Rational(1, 2) * w; }

std::vector<std::vector<Rational>> lattice_of(const AlgebraSpec& s, const std::vector<Weight>& gens) {
  std::vector<std::vector<Rational>> v;
  for (const auto& g : gens) v.push_back(finite_coords(s, g));
  return lattice_basis(v);
}

bool admissible(Family f, int k, int l) {
  switch (f) {
    case Family::A_2k_2lm1: return l >= 1 && k >= l;
    case Family::A_2l_2km1: return l >= 1 && k >= l + 1;
    case Family::A_2km1_2lm1: return l >= 1 && k >= l + 1;
    case Family::A_2lm1_2km1: return l >= 1 && k >= l && k >= 2;
    case Family::A_2km1_2km1: return k >= 2;
    case Family::A_2k_2l_4: return l >= 1 && k >= l + 1;
    case Family::A_2l_2k_4: return l >= 1 && k >= l;
    case Family::A_2k_2k_4: return k >= 1;
    case Family::D_kp1_l: return l >= 1 && k >= l + 1;
    case Family::D_lp1_k: return l >= 1 && k >= l;
    case Family::D_kp1_k: return k >= 1;
    case Family::C_lp1: return l >= 1;
    case Family::G3: return true;
  }
  return false;
}

int positive_count(const AlgebraSpec& s, Parity p, int level) {
  int n = 0;
  for (const auto& r : positive_roots(s, level))
    if (r.parity == p && r.root[BasisSymbol::delta()] == level && !r.root.finite_part().is_zero()) ++n;
  return n;
}

}  // namespace

TEST(RhoHat, G3) {
  auto s = build_spec(Family::G3, 0, 0);
  EXPECT_EQ(s.rho_hat, Weight::lambda0(3) - Weight::eps(3) + Weight::eps(1) + Weight::eps(2));
  EXPECT_EQ(s.h_dual, 3);
}

TEST(RhoHat, EqualRankOddRow) {
  auto s = build_spec(Family::A_2k_2lm1, 2, 2);
  Weight want = Weight::lambda0() + half(Weight::eps(1) - Weight::del(1) + Weight::eps(2) - Weight::del(2));
  EXPECT_EQ(s.rho_hat, want);
  EXPECT_EQ(s.h_dual, 1);
}

TEST(RhoHat, OneMoreEpsLetter) {
  // A(2l, 2l+1)^(2) at l = 2
  auto s = build_spec(Family::A_2l_2km1, 3, 2);
  Weight want = Weight::lambda0() + half(Weight::eps(1) - Weight::del(1) + Weight::eps(2) - Weight::del(2) + Weight::eps(3));
  EXPECT_EQ(s.rho_hat, want);
  EXPECT_EQ(s.h_dual, 1);
  auto v = validate_spec(s);
  ASSERT_FALSE(v.notes.empty());
  EXPECT_NE(v.notes[0].find("positivity not required"), std::string::npos);
}

TEST(RhoHat, DiagonalFamiliesHaveZeroDualCoxeter) {
  for (auto f : {Family::A_2km1_2km1, Family::A_2k_2k_4, Family::D_kp1_k}) {
    auto s = build_spec(f, 2, 0);
    EXPECT_EQ(s.h_dual, 0) << s.name();
    EXPECT_EQ(s.rho_hat, s.rho) << s.name();
    EXPECT_TRUE(s.diagonal());
  }
}

TEST(DualCoxeter, TwoFormulasAgree) {
  for (auto [f, k, l] : {std::tuple{Family::A_2k_2lm1, 2, 1}, {Family::A_2l_2km1, 3, 1}, {Family::A_2km1_2lm1, 3, 2},
                         {Family::A_2k_2l_4, 3, 1}, {Family::A_2l_2k_4, 2, 2}, {Family::D_kp1_l, 3, 1},
                         {Family::D_lp1_k, 2, 1}, {Family::C_lp1, 0, 2}, {Family::G3, 0, 0},
                         {Family::A_2km1_2km1, 3, 0}}) {
    auto s = build_spec(f, k, l);
    const Weight& a0 = s.simple_roots[0];
    EXPECT_EQ(s.form(a0, a0) / 2 + s.form(s.rho, s.theta), s.form(s.rho_hat, Weight::delta())) << s.name();
    EXPECT_EQ(h_dual(s), s.h_dual);
    EXPECT_EQ(a0, Weight::delta() - s.theta) << s.name();
    for (const auto& b : s.S) EXPECT_EQ(s.form(s.rho_hat, b), 0) << s.name();
  }
}

TEST(Lattices, DiagonalTranslationLattices) {
  for (int k : {2, 3}) {
    auto a = build_spec(Family::A_2km1_2km1, k, 0);
    std::vector<Weight> dels, twodels;
    for (int i = 1; i <= k; ++i) {
      dels.push_back(Weight::del(i));
      twodels.push_back(Weight::del(i, 2));
    }
    EXPECT_EQ(lattice_of(a, a.M_prime), lattice_of(a, dels));
    auto d = build_spec(Family::D_kp1_k, k, 0);
    EXPECT_EQ(lattice_of(d, d.M_prime), lattice_of(d, twodels));
  }
}

TEST(Lattices, SubsystemLabel) {
  auto s = build_spec(Family::D_kp1_l, 2, 1);
  EXPECT_EQ(subsystem(s, Sub::Prime).type_label, "D_3^(2)");
  EXPECT_EQ(s.prime_type, "D_3^(2)");
}

TEST(ImaginaryMults, DiagonalFamilies) {
  for (int k : {2, 3}) {
    auto a = build_spec(Family::A_2km1_2km1, k, 0);
    EXPECT_EQ((a.imaginary_mults.at({1, Parity::Even})), 2 * k - 2);
    EXPECT_EQ((a.imaginary_mults.at({0, Parity::Even})), 2 * k);
    auto d = build_spec(Family::D_kp1_k, k, 0);
    EXPECT_EQ((d.imaginary_mults.at({1, Parity::Even})), 1);
    auto q = build_spec(Family::A_2k_2k_4, k, 0);
    EXPECT_EQ((q.imaginary_mults.at({1, Parity::Odd})), 1);
    EXPECT_EQ((q.imaginary_mults.at({3, Parity::Odd})), 1);
    EXPECT_EQ((q.imaginary_mults.at({2, Parity::Even})), 2 * k);
    for (const auto* s : {&a, &d, &q}) EXPECT_EQ(imaginary_mults(*s), s->imaginary_mults);
  }
}

TEST(ImaginaryMults, SymmetricUnderMirror) {
  auto s = build_spec(Family::A_2l_2k_4, 2, 1);
  auto m = imaginary_mults(s);
  for (const auto& [key, v] : m) {
    auto it = m.find({(s.m - key.first) % s.m, key.second});
    ASSERT_NE(it, m.end());
    EXPECT_EQ(it->second, v);
  }
  EXPECT_EQ((m.at({0, Parity::Odd})), 0);
}

TEST(PositiveRoots, LevelZeroEvenCountInOddDiagonal) {
  auto s = build_spec(Family::A_2km1_2km1, 2, 0);
  // each nonzero level-0 root or its negative is positive
  EXPECT_EQ(2 * positive_count(s, Parity::Even, 0), 12);
  EXPECT_EQ((class_counts(s).at({0, Parity::Even})), 12);
}

TEST(PositiveRoots, G3LevelZeroOddRoots) {
  auto s = build_spec(Family::G3, 0, 0);
  std::set<Weight> got;
  for (const auto& r : positive_roots(s, 0))
    if (r.parity == Parity::Odd) got.insert(r.root);
  std::set<Weight> want;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) {
        Weight w = a * Weight::eps(1) + b * Weight::eps(2) + c * Weight::eps(3);
        auto x = s.basis->decompose(w);
        if (x && is_nonneg_integral(*x)) want.insert(w);
        auto y = s.basis->decompose(-w);
        EXPECT_NE(x && is_nonneg_integral(*x), y && is_nonneg_integral(*y)) << w.to_string();
      }
  EXPECT_EQ(got, want);
  EXPECT_EQ(got.size(), 4u);
}

TEST(PositiveRoots, NoImaginaryRootsAtLevelZero) {
  for (const auto& r : positive_roots(build_spec(Family::D_kp1_l, 2, 1), 0))
    EXPECT_FALSE(r.root.finite_part().is_zero());
}

TEST(PositiveRoots, SimpleRootsArePositiveAndMultiplicitiesSane) {
  auto s = build_spec(Family::A_2k_2l_4, 2, 1);
  auto roots = positive_roots(s, 4);
  for (const auto& a : s.simple_roots)
    EXPECT_TRUE(std::any_of(roots.begin(), roots.end(), [&](const RootDatum& r) { return r.root == a; }))
        << a.to_string();
  for (const auto& r : roots) {
    auto c = s.basis->decompose(r.root);
    ASSERT_TRUE(c && is_nonneg_integral(*c)) << r.root.to_string();
    if (!r.root.finite_part().is_zero()) EXPECT_EQ(r.multiplicity, 1);
    EXPECT_LE(r.root[BasisSymbol::delta()], 4);
  }
}

TEST(Validation, EveryFamilyAtSmallRank) {
  for (int fi = 0; fi <= static_cast<int>(Family::G3); ++fi) {
    auto f = static_cast<Family>(fi);
    for (int k = 0; k <= 3; ++k)
      for (int l = 0; l <= 3; ++l) {
        if (f == Family::G3 && (k || l)) continue;
        if (!admissible(f, k, l)) {
          EXPECT_THROW(build_spec(f, k, l), StructuralError) << family_token(f) << " " << k << " " << l;
          continue;
        }
        auto s = build_spec(f, k, l);
        auto v = validate_spec(s);
        EXPECT_TRUE(v.ok()) << s.name() << ": " << (v.ok() ? "" : v.failures[0]);
      }
  }
}

TEST(Validation, NonIsotropicSetIsReported) {
  auto s = build_spec(Family::A_2k_2lm1, 2, 2);
  ASSERT_EQ(s.S.size(), 2u);
  s.S = {s.simple_roots[1], s.simple_roots[2]};
  ASSERT_NE(s.form(s.S[0], s.S[1]), 0);
  auto v = validate_spec(s);
  EXPECT_NE(std::find(v.failures.begin(), v.failures.end(), "S not isotropic"), v.failures.end());
}

TEST(Validation, RankViolationThrows) {
  EXPECT_THROW(build_spec(Family::A_2k_2lm1, 0, 1), StructuralError);
  EXPECT_THROW(build_spec(Family::A_2km1_2km1, 1, 0), StructuralError);
}

TEST(Families, TokensRoundTrip) {
  for (const auto& t : family_tokens()) {
    auto f = parse_family(t);
    ASSERT_TRUE(f) << t;
    EXPECT_EQ(family_token(*f), t);
  }
  EXPECT_FALSE(parse_family("A_9").has_value());
  EXPECT_EQ(parse_family("G3_2"), Family::G3);
}

TEST(DataSheet, ListsTheRecordedData) {
  auto s = build_spec(Family::D_kp1_k, 2, 0);
  auto sheet = data_sheet(s);
  for (const char* key : {"simple roots:", "rho_hat:", "h_dual: 0/1", "M':", "imaginary multiplicities:"})
    EXPECT_NE(sheet.find(key), std::string::npos) << key;
  EXPECT_EQ(sheet, data_sheet(build_spec(Family::D_kp1_k, 2, 0)));
}
