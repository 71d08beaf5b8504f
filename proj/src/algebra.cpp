#include "superdenom/algebra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace superdenom {

namespace {

struct TokenEntry {
  Family family;
  const char* token;
};

constexpr std::array<TokenEntry, 13> kTokens = {{
    {Family::A_2k_2lm1, "A_2k_2l-1_2"},
    {Family::A_2l_2km1, "A_2l_2k-1_2"},
    {Family::A_2km1_2lm1, "A_2k-1_2l-1_2"},
    {Family::A_2lm1_2km1, "A_2l-1_2k-1_2"},
    {Family::A_2km1_2km1, "A_2k-1_2k-1_2"},
    {Family::A_2k_2l_4, "A_2k_2l_4"},
    {Family::A_2l_2k_4, "A_2l_2k_4"},
    {Family::A_2k_2k_4, "A_2k_2k_4"},
    {Family::D_kp1_l, "D_k+1_l_2"},
    {Family::D_lp1_k, "D_l+1_k_2"},
    {Family::D_kp1_k, "D_k+1_k_2"},
    {Family::C_lp1, "C_l+1_2"},
    {Family::G3, "G3_2"},
}};

bool is_diagonal(Family f) {
  return f == Family::A_2km1_2km1 || f == Family::A_2k_2k_4 || f == Family::D_kp1_k;
}

std::vector<int> residues_all(int m) {
  std::vector<int> r(m);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

std::vector<int> residues_mod(int m, int mod, int rem) {
  std::vector<int> r;
  for (int x = 0; x < m; ++x)
    if (x % mod == rem) r.push_back(x);
  return r;
}

unsigned mask_of(const std::vector<int>& res) {
  unsigned m = 0;
  for (int r : res) m |= 1u << r;
  return m;
}

int floor_mod(const Rational& x, int m) {
  mpz_class q = x.get_num() / x.get_den();
  if (q * x.get_den() != x.get_num()) throw StructuralError("non-integral level shift");
  mpz_class r = q % m;
  if (r < 0) r += m;
  return static_cast<int>(r.get_si());
}

unsigned rotate_mask(unsigned mask, int shift, int m) {
  unsigned out = 0;
  for (int r = 0; r < m; ++r)
    if (mask & (1u << r)) out |= 1u << (((r + shift) % m + m) % m);
  return out;
}

}  // namespace

std::string_view family_token(Family f) {
  for (const auto& e : kTokens)
    if (e.family == f) return e.token;
  return "?";
}

std::optional<Family> parse_family(std::string_view token) {
  for (const auto& e : kTokens)
    if (token == e.token) return e.family;
  return std::nullopt;
}

const std::vector<std::string>& family_tokens() {
  static const std::vector<std::string> tokens = [] {
    std::vector<std::string> v;
    for (const auto& e : kTokens) v.emplace_back(e.token);
    return v;
  }();
  return tokens;
}

std::string_view parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

std::string_view fq_name(FqSelector s) {
  switch (s) {
    case FqSelector::One: return "one";
    case FqSelector::AOddSquareInv: return "A_odd_square_inv";
    case FqSelector::AQuarterInv: return "A_quarter_inv";
    case FqSelector::DPlain: return "D_plain";
  }
  return "?";
}

std::vector<BasisSymbol> AlgebraSpec::finite_symbols() const {
  std::vector<BasisSymbol> s;
  for (int i = 1; i <= num_eps; ++i) s.push_back(BasisSymbol::eps(i));
  for (int j = 1; j <= num_del; ++j) s.push_back(BasisSymbol::del(j));
  return s;
}

std::string AlgebraSpec::name() const {
  switch (family) {
    case Family::A_2k_2lm1: return fmt::format("A({},{})^(2)", 2 * k, 2 * l - 1);
    case Family::A_2l_2km1: return fmt::format("A({},{})^(2)", 2 * l, 2 * k - 1);
    case Family::A_2km1_2lm1: return fmt::format("A({},{})^(2)", 2 * k - 1, 2 * l - 1);
    case Family::A_2lm1_2km1: return fmt::format("A({},{})^(2)", 2 * l - 1, 2 * k - 1);
    case Family::A_2km1_2km1: return fmt::format("A({},{})^(2)", 2 * k - 1, 2 * k - 1);
    case Family::A_2k_2l_4: return fmt::format("A({},{})^(4)", 2 * k, 2 * l);
    case Family::A_2l_2k_4: return fmt::format("A({},{})^(4)", 2 * l, 2 * k);
    case Family::A_2k_2k_4: return fmt::format("A({},{})^(4)", 2 * k, 2 * k);
    case Family::D_kp1_l: return fmt::format("D({},{})^(2)", k + 1, l);
    case Family::D_lp1_k: return fmt::format("D({},{})^(2)", l + 1, k);
    case Family::D_kp1_k: return fmt::format("D({},{})^(2)", k + 1, k);
    case Family::C_lp1: return fmt::format("C({})^(2)", l + 1);
    case Family::G3: return "G(3)^(2)";
  }
  return "?";
}

unsigned AlgebraSpec::residue_mask(Parity p, const Weight& w) const {
  auto it = masks.find({p, w});
  return it == masks.end() ? 0u : it->second;
}

int AlgebraSpec::residue_period(Parity p, const Weight& w) const {
  unsigned mask = residue_mask(p, w);
  for (int d = 1; d <= m; ++d)
    if (m % d == 0 && rotate_mask(mask, d, m) == mask) return d;
  return m;
}

std::vector<Rational> finite_coords(const AlgebraSpec& spec, const Weight& w) {
  std::vector<Rational> c;
  c.reserve(spec.dim());
  for (const auto& s : spec.finite_symbols()) c.push_back(w[s]);
  return c;
}

Weight from_finite_coords(const AlgebraSpec& spec, const std::vector<Rational>& c) {
  Weight w;
  auto syms = spec.finite_symbols();
  for (std::size_t i = 0; i < syms.size(); ++i) w.set(syms[i], c[i]);
  return w;
}

namespace {

// Table-1 root patterns and Table-2 simple roots for one family.
void fill_tables(AlgebraSpec& s) {
  const int ne = s.num_eps, nd = s.num_del, m = s.m;
  const int k = s.k, l = s.l;
  auto e = [](int i) { return Weight::eps(i); };
  auto d = [](int j) { return Weight::del(j); };
  const Weight dl = Weight::delta();

  auto pm_pairs = [](auto letter, int cnt) {
    std::vector<Weight> out;
    for (int i = 1; i <= cnt; ++i)
      for (int j = i + 1; j <= cnt; ++j)
        for (int a : {1, -1})
          for (int b : {1, -1}) out.push_back(a * letter(i) + b * letter(j));
    return out;
  };
  auto pm_single = [](auto letter, int cnt, int c = 1) {
    std::vector<Weight> out;
    for (int i = 1; i <= cnt; ++i)
      for (int sg : {1, -1}) out.push_back((sg * c) * letter(i));
    return out;
  };
  auto pm_mixed = [&] {
    std::vector<Weight> out;
    for (int i = 1; i <= ne; ++i)
      for (int j = 1; j <= nd; ++j)
        for (int a : {1, -1})
          for (int b : {1, -1}) out.push_back(a * e(i) + b * d(j));
    return out;
  };

  const auto ALL = residues_all(m);
  const auto ODD = residues_mod(m, 2, 1);
  const auto EVEN = residues_mod(m, 2, 0);
  const auto R4_2 = residues_mod(m, 4, 2);
  const auto R4_0 = residues_mod(m, 4, 0);
  const Parity E0 = Parity::Even, O1 = Parity::Odd;
  const Sub P1 = Sub::Prime, P2 = Sub::DoublePrime, NO = Sub::None;

  std::vector<RootPattern> P;
  auto add = [&](Parity p, const std::vector<int>& r, std::vector<Weight> w, Sub t) {
    if (!w.empty()) P.push_back({p, r, std::move(w), t});
  };

  switch (s.family) {
    case Family::A_2k_2lm1:
      add(E0, ALL, pm_pairs(e, ne), P1);
      add(E0, ALL, pm_single(e, ne), P1);
      add(E0, ODD, pm_single(e, ne, 2), P1);
      add(E0, ALL, pm_pairs(d, nd), P2);
      add(E0, EVEN, pm_single(d, nd, 2), P2);
      add(O1, ALL, pm_mixed(), NO);
      add(O1, ALL, pm_single(d, nd), NO);
      break;
    case Family::A_2l_2km1:
      add(E0, ALL, pm_pairs(d, nd), P2);
      add(E0, ALL, pm_single(d, nd), P2);
      add(E0, ODD, pm_single(d, nd, 2), P2);
      add(E0, ALL, pm_pairs(e, ne), P1);
      add(E0, EVEN, pm_single(e, ne, 2), P1);
      add(O1, ALL, pm_mixed(), NO);
      add(O1, ALL, pm_single(e, ne), NO);
      break;
    case Family::A_2km1_2lm1:
      add(E0, ALL, pm_pairs(e, ne), P1);
      add(E0, ODD, pm_single(e, ne, 2), P1);
      add(E0, ALL, pm_pairs(d, nd), P2);
      add(E0, EVEN, pm_single(d, nd, 2), P2);
      add(O1, ALL, pm_mixed(), NO);
      break;
    case Family::A_2lm1_2km1:
    case Family::A_2km1_2km1: {
      const bool diag = s.family == Family::A_2km1_2km1;
      const Sub pe = diag ? P2 : P1, pd = diag ? P1 : P2;
      add(E0, ALL, pm_pairs(d, nd), pd);
      add(E0, ODD, pm_single(d, nd, 2), pd);
      add(E0, ALL, pm_pairs(e, ne), pe);
      add(E0, EVEN, pm_single(e, ne, 2), pe);
      add(O1, ALL, pm_mixed(), NO);
      break;
    }
    case Family::A_2k_2l_4:
      add(E0, EVEN, pm_pairs(e, ne), P1);
      add(E0, EVEN, pm_single(e, ne), P1);
      add(E0, R4_2, pm_single(e, ne, 2), P1);
      add(E0, EVEN, pm_pairs(d, nd), P2);
      add(E0, ODD, pm_single(d, nd), P2);
      add(E0, R4_0, pm_single(d, nd, 2), P2);
      add(O1, ODD, pm_single(e, ne), NO);
      add(O1, EVEN, pm_single(d, nd), NO);
      add(O1, EVEN, pm_mixed(), NO);
      break;
    case Family::A_2l_2k_4:
    case Family::A_2k_2k_4: {
      const bool diag = s.family == Family::A_2k_2k_4;
      const Sub pe = diag ? P2 : P1, pd = diag ? P1 : P2;
      add(E0, EVEN, pm_pairs(d, nd), pd);
      add(E0, EVEN, pm_single(d, nd), pd);
      add(E0, R4_2, pm_single(d, nd, 2), pd);
      add(E0, EVEN, pm_pairs(e, ne), pe);
      add(E0, ODD, pm_single(e, ne), pe);
      add(E0, R4_0, pm_single(e, ne, 2), pe);
      add(O1, ODD, pm_single(d, nd), NO);
      add(O1, EVEN, pm_single(e, ne), NO);
      add(O1, EVEN, pm_mixed(), NO);
      break;
    }
    case Family::D_kp1_l:
      add(E0, EVEN, pm_pairs(e, ne), P1);
      add(E0, ALL, pm_single(e, ne), P1);
      add(E0, EVEN, pm_pairs(d, nd), P2);
      add(E0, EVEN, pm_single(d, nd, 2), P2);
      add(O1, EVEN, pm_mixed(), NO);
      add(O1, ALL, pm_single(d, nd), NO);
      break;
    case Family::D_lp1_k:
    case Family::D_kp1_k:
    case Family::C_lp1: {
      const bool diag = s.family == Family::D_kp1_k;
      const Sub pe = diag ? P2 : P1, pd = diag ? P1 : P2;
      add(E0, EVEN, pm_pairs(d, nd), pd);
      add(E0, ALL, pm_single(d, nd), pd);
      add(E0, EVEN, pm_pairs(e, ne), pe);
      add(E0, EVEN, pm_single(e, ne, 2), pe);
      add(O1, EVEN, pm_mixed(), NO);
      add(O1, ALL, pm_single(e, ne), NO);
      break;
    }
    case Family::G3: {
      std::vector<Weight> a1a1 = pm_single(e, 1, 2);
      for (auto& w : pm_single([](int) { return Weight::eps(2); }, 1, 2)) a1a1.push_back(w);
      add(E0, EVEN, a1a1, P1);
      add(E0, EVEN, pm_single([](int) { return Weight::eps(3); }, 1, 2), P2);
      std::vector<Weight> g2;
      for (int sg : {1, -1}) {
        g2.push_back(sg * (3 * e(2) + e(1)));
        g2.push_back(sg * (3 * e(2) - e(1)));
        g2.push_back(sg * (e(1) + e(2)));
        g2.push_back(sg * (e(2) - e(1)));
      }
      add(E0, ODD, g2, P1);
      std::vector<Weight> odd_even, odd_odd;
      for (int a : {1, -1})
        for (int b : {1, -1})
          for (int c : {1, -1}) odd_even.push_back(a * e(1) + b * e(2) + c * e(3));
      for (int a : {1, -1})
        for (int b : {1, -1}) odd_odd.push_back((2 * a) * e(2) + b * e(3));
      odd_odd.push_back(e(3));
      odd_odd.push_back(-e(3));
      add(O1, EVEN, odd_even, NO);
      add(O1, ODD, odd_odd, NO);
      break;
    }
  }
  s.patterns = std::move(P);

  // Simple roots: a chain of differences followed by the last finite root and alpha_0.
  std::vector<Weight> S;
  auto chain = [&](const std::vector<Weight>& seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) S.push_back(seq[i] - seq[i + 1]);
  };
  std::vector<Weight> seq;
  Weight last, a0;
  switch (s.family) {
    case Family::A_2k_2lm1:
      if (k == l) {
        for (int i = 1; i <= k; ++i) {
          seq.push_back(d(i));
          seq.push_back(e(i));
        }
        last = e(k);
        a0 = dl - e(1) - d(1);
      } else {
        for (int i = 1; i <= l; ++i) {
          seq.push_back(e(i));
          seq.push_back(d(i));
        }
        for (int i = l + 1; i <= k; ++i) seq.push_back(e(i));
        last = e(k);
        a0 = dl - 2 * e(1);
      }
      break;
    case Family::A_2l_2km1:
      if (k == l + 1) {
        for (int i = 1; i <= l; ++i) {
          seq.push_back(e(i));
          seq.push_back(d(i));
        }
        seq.push_back(e(l + 1));
        last = e(l + 1);
        a0 = dl - d(1) - e(1);
      } else {
        seq.push_back(e(1));
        for (int i = 1; i <= l; ++i) {
          seq.push_back(e(i + 1));
          seq.push_back(d(i));
        }
        for (int i = l + 2; i <= k; ++i) seq.push_back(e(i));
        last = e(k);
        a0 = dl - e(1) - e(2);
      }
      break;
    case Family::A_2km1_2lm1:
      for (int i = 1; i <= l; ++i) {
        seq.push_back(e(i));
        seq.push_back(d(i));
      }
      for (int i = l + 1; i <= k; ++i) seq.push_back(e(i));
      last = seq[seq.size() - 2] + seq.back();
      a0 = dl - 2 * e(1);
      break;
    case Family::A_2km1_2km1:
      for (int i = 1; i <= k; ++i) {
        seq.push_back(e(i));
        seq.push_back(d(i));
      }
      last = e(k) + d(k);
      a0 = dl - e(1) - d(1);
      break;
    case Family::A_2lm1_2km1:
      seq.push_back(e(1));
      for (int i = 1; i <= l; ++i) {
        seq.push_back(e(i + 1));
        seq.push_back(d(i));
      }
      if (k == l + 1) {
        last = e(l + 1) + d(l);
      } else {
        for (int i = l + 2; i <= k; ++i) seq.push_back(e(i));
        last = 2 * e(k);
      }
      a0 = dl - e(1) - e(2);
      break;
    case Family::A_2k_2l_4:
    case Family::A_2l_2k_4:
    case Family::D_kp1_l:
    case Family::D_lp1_k:
      for (int i = 1; i <= l; ++i) {
        seq.push_back(e(i));
        seq.push_back(d(i));
      }
      for (int i = l + 1; i <= k; ++i) seq.push_back(e(i));
      last = e(k);
      a0 = dl - e(1);
      break;
    case Family::C_lp1:
      for (int i = 1; i <= l; ++i) seq.push_back(e(i));
      last = e(l);
      a0 = dl - e(1);
      break;
    case Family::A_2k_2k_4:
    case Family::D_kp1_k:
      for (int i = 1; i <= k; ++i) {
        seq.push_back(e(i));
        seq.push_back(d(i));
      }
      last = d(k);
      a0 = dl - e(1);
      break;
    case Family::G3:
      S = {e(3) - e(2) - e(1), 2 * e(1), 2 * e(2)};
      a0 = dl - e(3) - 2 * e(2);
      break;
  }
  if (s.family != Family::G3) {
    chain(seq);
    S.push_back(last);
  }
  s.simple_roots.clear();
  s.simple_roots.push_back(a0);
  for (auto& w : S) s.simple_roots.push_back(w);
}

void check_ranks(Family f, int k, int l) {
  auto fail = [&](const char* rule) {
    throw StructuralError(fmt::format("rank constraint violated for {} (k={}, l={}): {}",
                                      family_token(f), k, l, rule));
  };
  switch (f) {
    case Family::A_2k_2lm1:
      if (l < 1 || k < l) fail("k >= l >= 1");
      break;
    case Family::A_2l_2km1:
    case Family::A_2km1_2lm1:
    case Family::A_2k_2l_4:
    case Family::D_kp1_l:
      if (l < 1 || k < l + 1) fail("k >= l+1, l >= 1");
      break;
    case Family::A_2lm1_2km1:
    case Family::A_2l_2k_4:
    case Family::D_lp1_k:
      if (l < 1 || k < l) fail("k >= l >= 1");
      break;
    case Family::A_2km1_2km1:
      if (k < 2) fail("k >= 2");
      break;
    case Family::A_2k_2k_4:
    case Family::D_kp1_k:
      if (k < 1) fail("k >= 1");
      break;
    case Family::C_lp1:
      if (l < 1) fail("l >= 1");
      break;
    case Family::G3:
      break;
  }
}

std::vector<std::vector<Rational>> to_rows(const AlgebraSpec& s, const std::vector<Weight>& ws) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& w : ws) rows.push_back(finite_coords(s, w));
  return rows;
}

std::vector<Weight> rule_generators(const AlgebraSpec& s, Sub which) {
  std::vector<Weight> gens;
  for (int n = 1; n <= 2 * s.m; ++n)
    for (const auto& p : s.patterns) {
      if (p.parity != Parity::Even || p.sub != which) continue;
      if (std::find(p.residues.begin(), p.residues.end(), n % s.m) == p.residues.end()) continue;
      for (const auto& w : p.finite) {
        Rational aa = s.form(w, w);
        if (aa == 0) continue;
        gens.push_back((Rational(2 * n) / aa) * w);
      }
    }
  return gens;
}

std::vector<Weight> hnf_weights(const AlgebraSpec& s, const std::vector<Weight>& gens) {
  std::vector<Weight> out;
  for (const auto& row : lattice_basis(to_rows(s, gens))) out.push_back(from_finite_coords(s, row));
  return out;
}

// Sublattice of span(B) whose translations keep every root shadow at a root level.
std::vector<Weight> preserving_sublattice(const AlgebraSpec& s, const std::vector<Weight>& B) {
  const std::size_t r = B.size();
  if (r == 0) return {};
  struct Cond {
    std::vector<Rational> vals;
    int period;
  };
  std::vector<Cond> conds;
  for (const auto& p : s.patterns)
    for (const auto& w : p.finite) {
      Cond c;
      for (const auto& b : B) c.vals.push_back(s.form(w, b));
      c.period = s.residue_period(p.parity, w);
      conds.push_back(std::move(c));
    }
  mpz_class N = 1;
  for (const auto& c : conds)
    for (const auto& v : c.vals) N = lcm(N, mpz_class(c.period * v.get_den()));
  const long n = N.get_si();
  long total = 1;
  for (std::size_t i = 0; i < r; ++i) {
    total *= n;
    if (total > 2'000'000) throw StructuralError("translation sublattice search too large");
  }
  std::vector<std::vector<Rational>> gens;
  std::vector<long> c(r, 0);
  for (long idx = 0; idx < total; ++idx) {
    long t = idx;
    for (std::size_t i = 0; i < r; ++i) {
      c[i] = t % n;
      t /= n;
    }
    bool ok = true;
    for (const auto& cond : conds) {
      Rational v = 0;
      for (std::size_t i = 0; i < r; ++i) v += cond.vals[i] * c[i];
      if (v.get_den() != 1 || v.get_num() % cond.period != 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<Rational> g(r);
      for (std::size_t i = 0; i < r; ++i) g[i] = c[i];
      gens.push_back(std::move(g));
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Rational> g(r);
    g[i] = Rational(N);
    gens.push_back(std::move(g));
  }
  std::vector<Weight> vecs;
  for (const auto& g : lattice_basis(gens)) {
    Weight mu;
    for (std::size_t i = 0; i < r; ++i) mu += g[i] * B[i];
    vecs.push_back(mu);
  }
  return hnf_weights(s, vecs);
}

std::string component_type(const AlgebraSpec& s, Sub which) {
  // B, C or D according to the level-0 shadows of the component.
  bool single = false, dbl = false, pairs = false;
  int letters = 0;
  std::set<BasisSymbol> used;
  for (const auto& p : s.patterns) {
    if (p.parity != Parity::Even || p.sub != which) continue;
    if (std::find(p.residues.begin(), p.residues.end(), 0) == p.residues.end()) continue;
    for (const auto& w : p.finite) {
      for (const auto& [sym, c] : w.coords()) used.insert(sym);
      if (w.coords().size() == 2) pairs = true;
      if (w.coords().size() == 1) (abs(w.coords().begin()->second) == 1 ? single : dbl) = true;
    }
  }
  letters = static_cast<int>(used.size());
  if (letters == 0) return "";
  if (single) return fmt::format("B{}", letters);
  if (dbl) return fmt::format("C{}", letters);
  if (pairs) return fmt::format("D{}", letters);
  return fmt::format("A1^{}", letters);
}

int component_rank(const AlgebraSpec& s, Sub which) {
  std::set<BasisSymbol> used;
  for (const auto& p : s.patterns) {
    if (p.parity != Parity::Even || p.sub != which) continue;
    if (std::find(p.residues.begin(), p.residues.end(), 0) == p.residues.end()) continue;
    for (const auto& w : p.finite)
      for (const auto& [sym, c] : w.coords()) used.insert(sym);
  }
  return static_cast<int>(used.size());
}

void fill_labels(AlgebraSpec& s) {
  const int k = s.k, l = s.l;
  auto a2 = [](int n) { return fmt::format("A_{}^(2)", n); };
  switch (s.family) {
    case Family::A_2k_2lm1:
      s.finite_type = fmt::format("B({},{})", k, l);
      s.prime_type = a2(2 * k);
      s.doubleprime_type = a2(2 * l - 1);
      break;
    case Family::A_2l_2km1:
      s.finite_type = fmt::format("B({},{})", l, k);
      s.prime_type = a2(2 * k - 1);
      s.doubleprime_type = a2(2 * l);
      break;
    case Family::A_2km1_2lm1:
      s.finite_type = fmt::format("D({},{})", k, l);
      s.prime_type = a2(2 * k - 1);
      s.doubleprime_type = a2(2 * l - 1);
      break;
    case Family::A_2lm1_2km1:
      s.finite_type = fmt::format("D({},{})", l, k);
      s.prime_type = a2(2 * k - 1);
      s.doubleprime_type = a2(2 * l - 1);
      break;
    case Family::A_2km1_2km1:
      s.finite_type = fmt::format("D({},{})", k, k);
      s.prime_type = s.doubleprime_type = a2(2 * k - 1);
      break;
    case Family::A_2k_2l_4:
      s.finite_type = fmt::format("B({},{})", k, l);
      s.prime_type = a2(2 * k);
      s.doubleprime_type = a2(2 * l);
      break;
    case Family::A_2l_2k_4:
      s.finite_type = fmt::format("B({},{})", l, k);
      s.prime_type = a2(2 * k);
      s.doubleprime_type = a2(2 * l);
      break;
    case Family::A_2k_2k_4:
      s.finite_type = fmt::format("B({},{})", k, k);
      s.prime_type = s.doubleprime_type = a2(2 * k);
      break;
    case Family::D_kp1_l:
      s.finite_type = fmt::format("B({},{})", k, l);
      s.prime_type = fmt::format("D_{}^(2)", k + 1);
      s.doubleprime_type = fmt::format("C_{}^(1)", l);
      break;
    case Family::D_lp1_k:
      s.finite_type = fmt::format("B({},{})", l, k);
      s.prime_type = fmt::format("C_{}^(1)", k);
      s.doubleprime_type = fmt::format("D_{}^(2)", l + 1);
      break;
    case Family::D_kp1_k:
      s.finite_type = fmt::format("B({},{})", k, k);
      s.prime_type = fmt::format("D_{}^(2)", k + 1);
      s.doubleprime_type = fmt::format("C_{}^(1)", k);
      break;
    case Family::C_lp1:
      s.finite_type = fmt::format("B(0,{})", l);
      s.prime_type = fmt::format("C_{}^(1)", l);
      s.doubleprime_type = "none";
      break;
    case Family::G3:
      s.finite_type = "D(1,2,-3/4)";
      s.prime_type = "G_2^(1)";
      s.doubleprime_type = "A_1^(1)";
      break;
  }
}

bool is_positive_root_vector(const AlgebraSpec& s, const Weight& w) {
  auto c = s.basis->decompose(w);
  if (!c || !is_nonneg_integral(*c)) return false;
  return std::any_of(c->begin(), c->end(), [](const Rational& x) { return x != 0; });
}

}  // namespace

std::pair<int, int> superalgebra_dims(const AlgebraSpec& s) {
  const int k = s.k, l = s.l;
  auto sl = [](int a, int b) { return std::pair{a * a + b * b - 1, 2 * a * b}; };
  switch (s.family) {
    case Family::A_2k_2lm1: return sl(2 * k + 1, 2 * l);
    case Family::A_2l_2km1: return sl(2 * l + 1, 2 * k);
    case Family::A_2km1_2lm1:
    case Family::A_2lm1_2km1: return sl(2 * k, 2 * l);
    case Family::A_2km1_2km1: return {8 * k * k - 2, 8 * k * k};
    case Family::A_2k_2l_4:
    case Family::A_2l_2k_4: return sl(2 * k + 1, 2 * l + 1);
    case Family::A_2k_2k_4: {
      const int a = 2 * k + 1;
      return {2 * a * a - 2, 2 * a * a};
    }
    case Family::D_kp1_l:
    case Family::D_kp1_k: return {(k + 1) * (2 * k + 1) + l * (2 * l + 1), (2 * k + 2) * 2 * l};
    case Family::D_lp1_k: return {(l + 1) * (2 * l + 1) + k * (2 * k + 1), (2 * l + 2) * 2 * k};
    case Family::C_lp1: return {1 + l * (2 * l + 1), 4 * l};
    case Family::G3: return {17, 14};
  }
  return {0, 0};
}

std::map<std::pair<int, Parity>, int> class_counts(const AlgebraSpec& s) {
  std::map<std::pair<int, Parity>, int> c;
  for (int j = 0; j < s.m; ++j)
    for (Parity p : {Parity::Even, Parity::Odd}) c[{j, p}] = 0;
  for (const auto& p : s.patterns)
    for (int r : p.residues) c[{r, p.parity}] += static_cast<int>(p.finite.size());
  return c;
}

std::map<std::pair<int, Parity>, int> imaginary_mults(const AlgebraSpec& s) {
  // Classes that may carry imaginary roots (besides the Cartan part at class 0).
  std::vector<std::pair<int, Parity>> open;
  if (s.family == Family::G3) {
  } else if (s.m == 4) {
    open = {{2, Parity::Even}, {1, Parity::Odd}, {3, Parity::Odd}};
  } else {
    open = {{1, Parity::Even}};
  }
  auto counts = class_counts(s);
  auto [d0, d1] = superalgebra_dims(s);
  std::map<std::pair<int, Parity>, int> mult;
  for (int j = 0; j < s.m; ++j)
    for (Parity p : {Parity::Even, Parity::Odd}) mult[{j, p}] = 0;
  mult[{0, Parity::Even}] = s.dim();
  for (Parity p : {Parity::Even, Parity::Odd}) {
    int rest = p == Parity::Even ? d0 - s.dim() : d1;
    for (int j = 0; j < s.m; ++j) rest -= counts[{j, p}];
    std::vector<int> js;
    for (const auto& [j, pp] : open)
      if (pp == p) js.push_back(j);
    if (js.empty()) {
      if (rest != 0)
        throw StructuralError(fmt::format("dimension bookkeeping fails for {} ({} part off by {})",
                                          s.name(), parity_name(p), rest));
      continue;
    }
    const int cnt = static_cast<int>(js.size());
    if (rest < 0 || rest % cnt != 0)
      throw StructuralError(fmt::format("dimension bookkeeping infeasible for {}", s.name()));
    for (int j : js) mult[{j, p}] = rest / cnt;
  }
  return mult;
}

Rational h_dual(const AlgebraSpec& spec) { return spec.form(spec.rho_hat, Weight::delta()); }

std::vector<RootDatum> positive_roots(const AlgebraSpec& s, int max_delta) {
  std::vector<RootDatum> out;
  for (int n = 0; n <= max_delta; ++n) {
    for (const auto& p : s.patterns) {
      if (std::find(p.residues.begin(), p.residues.end(), n % s.m) == p.residues.end()) continue;
      for (const auto& w : p.finite) {
        Weight r = Weight::delta(n) + w;
        if (n > 0 || is_positive_root_vector(s, r)) out.push_back({r, p.parity, 1});
      }
    }
    if (n > 0)
      for (Parity p : {Parity::Even, Parity::Odd}) {
        auto it = s.imaginary_mults.find({n % s.m, p});
        if (it != s.imaginary_mults.end() && it->second > 0)
          out.push_back({Weight::delta(n), p, it->second});
      }
  }
  return out;
}

SubsystemInfo subsystem(const AlgebraSpec& s, Sub which) {
  SubsystemInfo info;
  info.which = which;
  info.type_label = which == Sub::Prime ? s.prime_type : s.doubleprime_type;
  std::set<Weight> seen;
  for (const auto& p : s.patterns)
    if (p.parity == Parity::Even && p.sub == which)
      for (const auto& w : p.finite)
        if (seen.insert(w).second) info.shadows.push_back(w);
  info.lattice = which == Sub::Prime ? s.M_prime : s.M_doubleprime;
  return info;
}

bool translation_preserves_roots(const AlgebraSpec& s, const Weight& mu) {
  for (const auto& [key, mask] : s.masks) {
    Rational shift = -s.form(key.second, mu);
    if (shift.get_den() != 1) return false;
    if (rotate_mask(mask, floor_mod(shift, s.m), s.m) != mask) return false;
  }
  return true;
}

AlgebraSpec build_spec(Family family, int k, int l) {
  check_ranks(family, k, l);
  // Mirror rows at k = l are the diagonal algebras.
  if (k == l) {
    if (family == Family::A_2km1_2lm1 || family == Family::A_2lm1_2km1)
      family = Family::A_2km1_2km1;
    else if (family == Family::A_2k_2l_4 || family == Family::A_2l_2k_4)
      family = Family::A_2k_2k_4;
    else if (family == Family::D_kp1_l || family == Family::D_lp1_k)
      family = Family::D_kp1_k;
  }
  AlgebraSpec s;
  s.family = family;
  s.k = k;
  s.l = is_diagonal(family) ? k : l;
  if (family == Family::G3) {
    s.k = s.l = 0;
    s.num_eps = 3;
  } else if (family == Family::C_lp1) {
    s.k = 0;
    s.num_eps = l;
  } else {
    s.num_eps = s.k;
    s.num_del = s.l;
  }
  s.m = (family == Family::A_2k_2l_4 || family == Family::A_2l_2k_4 || family == Family::A_2k_2k_4)
            ? 4
            : 2;
  const bool zero_dual = is_diagonal(family);
  if (family == Family::G3) {
    s.form = BilinearForm({Rational(3, 2), Rational(1, 2), Rational(-2)}, {});
  } else {
    const int sigma = zero_dual ? -1 : 1;
    s.form = BilinearForm(std::vector<Rational>(s.num_eps, Rational(sigma)),
                          std::vector<Rational>(s.num_del, Rational(-sigma)));
  }
  s.imaginary_period = family == Family::G3 ? 2 : 1;
  s.extended_sign = family == Family::A_2km1_2lm1 || family == Family::A_2km1_2km1;
  s.fq = family == Family::A_2km1_2km1 ? FqSelector::AOddSquareInv
         : family == Family::A_2k_2k_4 ? FqSelector::AQuarterInv
         : family == Family::D_kp1_k   ? FqSelector::DPlain
                                       : FqSelector::One;
  fill_tables(s);
  fill_labels(s);
  for (const auto& p : s.patterns)
    for (const auto& w : p.finite) s.masks[{p.parity, w}] |= mask_of(p.residues);

  auto span = s.finite_symbols();
  auto fin_span = span;
  span.push_back(BasisSymbol::delta());
  s.basis = std::make_shared<SimpleRootBasis>(s.simple_roots, span);
  std::vector<Weight> fin(s.simple_roots.begin() + 1, s.simple_roots.end());
  s.finite_basis = std::make_shared<SimpleRootBasis>(fin, fin_span);

  // Parities of the simple roots from the Table-1 lists.
  const Weight a0 = s.simple_roots[0];
  for (std::size_t i = 0; i < s.simple_roots.size(); ++i) {
    const Weight& a = s.simple_roots[i];
    Weight f = a.finite_part();
    unsigned even = s.residue_mask(Parity::Even, f), odd = s.residue_mask(Parity::Odd, f);
    const int level = floor_mod(a[BasisSymbol::delta()], s.m);
    if (odd & (1u << level))
      s.simple_parity.push_back(Parity::Odd);
    else if (even & (1u << level))
      s.simple_parity.push_back(Parity::Even);
    else
      throw StructuralError(fmt::format("simple root {} is not a root of {}", a.to_string(), s.name()));
  }

  // rho from (rho, alpha) = (alpha, alpha)/2 on the finite simple roots.
  {
    const int n = s.dim();
    Matrix A(n, std::vector<Rational>(n));
    std::vector<Rational> b(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A[i][j] = fin[i][fin_span[j]] * s.form.pair(fin_span[j], fin_span[j]);
      b[i] = s.form(fin[i], fin[i]) / 2;
    }
    auto x = solve_unique(A, b);
    if (!x) throw StructuralError("rho is not determined by the finite simple roots");
    s.rho = from_finite_coords(s, *x);
  }
  s.theta = Weight::delta() - a0;
  if (!(s.theta == s.theta.finite_part()))
    throw StructuralError("alpha_0 does not have the form delta - theta");
  s.h_dual = s.form(a0, a0) / 2 + s.form(s.rho, s.theta);
  s.rho_hat = s.rho + Weight::lambda0(s.h_dual);

  // Finite positive roots, with the positivity test on the finite basis.
  for (const auto& p : s.patterns) {
    if (std::find(p.residues.begin(), p.residues.end(), 0) == p.residues.end()) continue;
    for (const auto& w : p.finite) {
      auto c = s.finite_basis->decompose(w);
      if (c && is_nonneg_integral(*c)) s.finite_positive.push_back({w, p.parity});
    }
  }
  std::sort(s.finite_positive.begin(), s.finite_positive.end());

  s.imaginary_mults = imaginary_mults(s);

  // Maximal isotropic subset of the finite simple roots.
  s.defect = family == Family::G3 ? 1 : std::min(s.num_eps, s.num_del);
  {
    std::vector<Weight> iso;
    for (const auto& a : fin)
      if (s.form(a, a) == 0) iso.push_back(a);
    std::vector<int> pick;
    std::function<bool(std::size_t)> search = [&](std::size_t start) {
      if (static_cast<int>(pick.size()) == s.defect) return true;
      for (std::size_t i = start; i < iso.size(); ++i) {
        bool orth = std::all_of(pick.begin(), pick.end(),
                                [&](int j) { return s.form(iso[i], iso[j]) == 0; });
        if (!orth) continue;
        pick.push_back(static_cast<int>(i));
        if (search(i + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    if (!search(0)) throw StructuralError("no maximal isotropic subset of the simple roots");
    for (int i : pick) s.S.push_back(iso[i]);
  }

  s.M_rule = hnf_weights(s, rule_generators(s, Sub::Prime));
  s.M_prime = preserving_sublattice(s, s.M_rule);
  s.M_doubleprime = preserving_sublattice(s, hnf_weights(s, rule_generators(s, Sub::DoublePrime)));

  // W^# comes from the larger even component; ties go to the non-D type, then to Delta'.
  {
    const int rp = component_rank(s, Sub::Prime), rd = component_rank(s, Sub::DoublePrime);
    if (rp != rd) {
      s.sharp = rp > rd ? Sub::Prime : Sub::DoublePrime;
    } else {
      const bool dp = component_type(s, Sub::Prime).starts_with("D");
      const bool dd = component_type(s, Sub::DoublePrime).starts_with("D");
      s.sharp = (dp && !dd) ? Sub::DoublePrime : Sub::Prime;
    }
  }

  auto report = validate_spec(s);
  if (!report.ok())
    throw StructuralError(fmt::format("{}: {}", s.name(), report.failures.front()));
  return s;
}

ValidationReport validate_spec(const AlgebraSpec& s) {
  ValidationReport r;
  auto fail = [&](std::string msg) { r.failures.push_back(std::move(msg)); };

  // Independence is enforced when the basis is built; recheck the determinant.
  {
    auto span = s.finite_symbols();
    span.push_back(BasisSymbol::delta());
    Matrix a(span.size(), std::vector<Rational>(span.size()));
    for (std::size_t i = 0; i < span.size(); ++i)
      for (std::size_t j = 0; j < s.simple_roots.size() && j < span.size(); ++j)
        a[i][j] = s.simple_roots[j][span[i]];
    if (s.simple_roots.size() != span.size() || determinant(a) == 0)
      fail("simple roots are linearly dependent");
  }

  auto dc = s.basis->decompose(Weight::delta(s.imaginary_period));
  if (!dc || !is_nonneg_integral(*dc) ||
      std::any_of(dc->begin(), dc->end(), [](const Rational& x) { return x <= 0; }))
    fail("delta is not a positive integer combination of the simple roots");

  for (std::size_t i = 0; i < s.simple_roots.size(); ++i) {
    const Weight& a = s.simple_roots[i];
    unsigned mask = s.residue_mask(s.simple_parity[i], a.finite_part());
    const Rational lv = a[BasisSymbol::delta()];
    if (lv.get_den() != 1 || !(mask & (1u << floor_mod(lv, s.m))))
      fail(fmt::format("simple root {} missing from the root list", a.to_string()));
  }

  for (std::size_t i = 1; i < s.simple_roots.size(); ++i) {
    const Weight& a = s.simple_roots[i];
    if (s.form(s.rho, a) != s.form(a, a) / 2) fail("rho fails (rho,a)=(a,a)/2 at " + a.to_string());
  }
  if (s.form(s.rho_hat, s.simple_roots[0]) != s.form(s.simple_roots[0], s.simple_roots[0]) / 2)
    fail("rho_hat fails (rho_hat,a0)=(a0,a0)/2");
  if (s.form(s.rho_hat, Weight::delta()) != s.h_dual) fail("h_dual differs from (rho_hat, delta)");

  // theta must be the largest finite part among level-one roots.
  {
    std::vector<Weight> level1;
    for (const auto& p : s.patterns)
      if (std::find(p.residues.begin(), p.residues.end(), 1 % s.m) != p.residues.end())
        for (const auto& w : p.finite) level1.push_back(-w);
    bool top = std::find(level1.begin(), level1.end(), s.theta) != level1.end();
    for (const auto& w : level1) {
      if (w == s.theta) continue;
      auto c = s.finite_basis->decompose(w - s.theta);
      if (c && is_nonneg_integral(*c)) top = false;
    }
    if (!top) fail("theta is not the highest level-one finite part");
  }

  if (static_cast<int>(s.S.size()) != s.defect) fail("S has the wrong size");
  for (const auto& b : s.S) {
    if (std::find(s.simple_roots.begin() + 1, s.simple_roots.end(), b) == s.simple_roots.end())
      fail("S not contained in the simple roots");
    for (const auto& c : s.S)
      if (s.form(b, c) != 0) {
        fail("S not isotropic");
        goto s_done;
      }
    if (s.form(s.rho_hat, b) != 0) fail("rho_hat not orthogonal to S");
  }
s_done:

  if (s.h_dual != 0) {
    for (const auto& a : s.simple_roots)
      if (s.form(a, a) < 0) fail("simple root with negative square length: " + a.to_string());
    const bool exempt = s.family == Family::G3 || (s.family == Family::A_2k_2lm1 && s.k == s.l) ||
                        (s.family == Family::A_2l_2km1 && s.k == s.l + 1);
    const Rational a00 = s.form(s.simple_roots[0], s.simple_roots[0]);
    if (exempt)
      r.notes.push_back(fmt::format("(a0,a0) = {} (positivity not required for this family)", to_pq(a00)));
    else if (a00 <= 0)
      fail("(a0,a0) is not positive");
  }

  try {
    auto mult = imaginary_mults(s);
    if (mult != s.imaginary_mults) fail("imaginary multiplicities do not match the bookkeeping");
    for (const auto& [key, v] : mult) {
      auto mirror = std::pair{(s.m - key.first) % s.m, key.second};
      if (mult.at(mirror) != v) fail("imaginary multiplicities not symmetric under j -> m-j");
    }
  } catch (const StructuralError& e) {
    fail(e.what());
  }
  return r;
}

std::string data_sheet(const AlgebraSpec& s) {
  std::ostringstream o;
  auto list = [](const std::vector<Weight>& ws) {
    std::string out;
    for (const auto& w : ws) out += "  " + w.to_string() + "\n";
    return out;
  };
  o << "family: " << s.token() << "  " << s.name() << "\n";
  o << "k: " << s.k << "  l: " << s.l << "  m: " << s.m << "\n";
  o << "finite part: " << s.finite_type << "\n";
  o << "simple roots:\n";
  for (std::size_t i = 0; i < s.simple_roots.size(); ++i)
    o << "  a" << i << " = " << s.simple_roots[i].to_string() << "  (" << parity_name(s.simple_parity[i])
      << ")\n";
  o << "rho: " << s.rho.to_string() << "\n";
  o << "rho_hat: " << s.rho_hat.to_string() << "\n";
  o << "theta: " << s.theta.to_string() << "\n";
  o << "h_dual: " << to_pq(s.h_dual) << "\n";
  o << "S:\n" << list(s.S);
  o << "Delta': " << s.prime_type << "\nM':\n" << list(s.M_prime);
  o << "Delta'': " << s.doubleprime_type << "\nM'':\n" << list(s.M_doubleprime);
  o << "W#: " << (s.sharp == Sub::Prime ? "Delta'" : "Delta''") << "\n";
  o << "imaginary multiplicities:\n";
  for (const auto& [key, v] : s.imaginary_mults)
    o << "  (" << key.first << ", " << parity_name(key.second) << ") " << v << "\n";
  o << "f(q): " << fq_name(s.fq) << "\n";
  o << "extended sign: " << (s.extended_sign ? "yes" : "no") << "\n";
  return o.str();
}

}  // namespace superdenom
