#pragma once

// Both sides of the affine and finite denominator identities, expanded by the
// brute-force routines in oracle.hpp. Group actions are written out from the
// defining formulas instead of calling the library's group code.

#include "oracle.hpp"
#include "superdenom/algebra.hpp"

#include <map>
#include <set>
#include <utility>

namespace oracle {

using superdenom::AlgebraSpec;
using superdenom::BasisSymbol;
using superdenom::Parity;

inline Weight odd_positive_sum(const AlgebraSpec& s) {
  Weight w;
  for (const auto& [r, p] : s.finite_positive)
    if (p == Parity::Odd) w += r;
  return w;
}

inline Factor denominator(const Weight& root, Parity p, long mult) {
  return p == Parity::Even ? Factor{root, -1, mult} : Factor{root, 1, -mult};
}

// t_mu(lambda) = lambda + (lambda,delta) mu - ((lambda,mu) + (mu,mu)(lambda,delta)/2) delta
inline Weight translate(const AlgebraSpec& s, const Weight& mu, const Weight& lambda) {
  const Rational ld = s.form(lambda, Weight::delta());
  return lambda + ld * mu - (s.form(lambda, mu) + s.form(mu, mu) * ld / 2) * Weight::delta();
}

// f(q) as factors (1 + s e^{-(2n-1) delta})^e.
inline std::vector<Factor> f_factors(const AlgebraSpec& s, long qmax) {
  std::vector<Factor> out;
  for (long e = 1; e <= qmax; e += 2) {
    switch (s.fq) {
      case superdenom::FqSelector::AOddSquareInv: out.push_back({Weight::delta(e), -1, -2}); break;
      case superdenom::FqSelector::AQuarterInv: out.push_back({Weight::delta(e), 1, -1}); break;
      case superdenom::FqSelector::DPlain: out.push_back({Weight::delta(e), -1, 1}); break;
      case superdenom::FqSelector::One: break;
    }
  }
  return out;
}

struct Window {
  Weight anchor;
  long H;
};

inline Window window(const AlgebraSpec& s, long depth) {
  Weight sb = odd_positive_sum(s);
  return {s.rho_hat + sb, depth + height(to_vec(*s.basis->decompose(sb)))};
}

inline Poly affine_lhs(const AlgebraSpec& s, long depth) {
  auto w = window(s, depth);
  std::vector<Factor> fs;
  for (const auto& r : superdenom::positive_roots(s, static_cast<int>(w.H)))
    fs.push_back(denominator(r.root, r.parity, r.multiplicity));
  return term(*s.basis, w.anchor, w.H, s.rho_hat, fs);
}

// f(q) * sum over mu in M' (|coords| <= radius) of t_mu(e^{rho_hat} R). Not for
// the families whose translation group needs extra coset representatives.
inline Poly affine_translation_sum(const AlgebraSpec& s, long depth, int radius) {
  auto w = window(s, depth);
  const long hdelta = height(to_vec(*s.basis->decompose(Weight::delta())));
  auto fq = f_factors(s, w.H / hdelta);
  Poly out;
  const std::size_t n = s.M_prime.size();
  std::vector<int> c(n, -radius);
  while (true) {
    Weight mu;
    long parity = 0;
    for (std::size_t i = 0; i < n; ++i) mu += c[i] * s.M_prime[i];
    if (s.extended_sign)
      for (const auto& [sym, x] : mu.coords()) parity += x.get_num().get_si();
    std::vector<Factor> fs = fq;
    for (const auto& [r, p] : s.finite_positive) fs.push_back(denominator(translate(s, mu, r), p, 1));
    add(out, term(*s.basis, w.anchor, w.H, translate(s, mu, s.rho_hat), fs), parity % 2 ? -1 : 1);
    std::size_t i = 0;
    while (i < n && c[i] == radius) c[i++] = -radius;
    if (i == n) break;
    ++c[i];
  }
  return out;
}

// Closure of reflections on the finite span; each element maps symbol -> image,
// with the sign of the shortest word found by breadth-first search.
struct FiniteElement {
  std::map<BasisSymbol, Weight> images;
  int sign;
};

inline Weight act(const FiniteElement& g, const Weight& w) {
  Weight out;
  for (const auto& [sym, x] : w.coords()) {
    auto it = g.images.find(sym);
    out += x * (it == g.images.end() ? Weight::of(sym) : it->second);
  }
  return out;
}

inline std::vector<FiniteElement> weyl_closure(const AlgebraSpec& s, const std::vector<Weight>& roots) {
  auto refl = [&](const Weight& a, const Weight& x) { return x - (2 * s.form(x, a) / s.form(a, a)) * a; };
  FiniteElement id{{}, 1};
  for (auto sym : s.finite_symbols()) id.images[sym] = Weight::of(sym);
  std::vector<FiniteElement> out{id};
  std::set<std::map<BasisSymbol, Weight>> seen{id.images};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& a : roots) {
      FiniteElement g{{}, -out[i].sign};
      for (const auto& [sym, img] : out[i].images) g.images[sym] = refl(a, img);
      if (seen.insert(g.images).second) out.push_back(std::move(g));
    }
  return out;
}

struct FiniteSides {
  Poly lhs, rhs;
  std::size_t order;
};

// e^rho R and sum_w sgn(w) w(e^rho / prod_S (1 + e^{-beta})) over the finite simple roots.
inline FiniteSides finite_identity(const AlgebraSpec& s, const std::vector<Weight>& weyl_roots, long depth) {
  const auto& B = *s.finite_basis;
  Weight sb = odd_positive_sum(s);
  Weight anchor = s.rho + sb;
  const long H = depth + (sb.is_zero() ? 0 : height(to_vec(*B.decompose(sb))));
  std::vector<Factor> fs;
  for (const auto& [r, p] : s.finite_positive) fs.push_back(denominator(r, p, 1));
  FiniteSides out{term(B, anchor, H, s.rho, fs), {}, 0};
  auto group = weyl_closure(s, weyl_roots);
  out.order = group.size();
  for (const auto& g : group) {
    std::vector<Factor> iso;
    for (const auto& b : s.S) iso.push_back({act(g, b), 1, -1});
    add(out.rhs, term(B, anchor, H, act(g, s.rho), iso), g.sign);
  }
  return out;
}

}  // namespace oracle
