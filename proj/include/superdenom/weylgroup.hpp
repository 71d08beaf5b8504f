#pragma once

#include "superdenom/algebra.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace superdenom {

// t_mu o y in normal form. `linear` acts on finite coordinates (eps.., del..) as
// column images; delta and Lambda0 are fixed by y.
struct GroupElement {
  Matrix linear;
  Weight translation;
  int sign = 1;
  int parity = 0;  // p(g) for the extended families

  bool operator==(const GroupElement& o) const {
    return linear == o.linear && translation == o.translation;
  }
};

GroupElement identity_element(const AlgebraSpec& spec);
// s_alpha for a real root alpha = c delta + a with (a,a) != 0; equals t_{-2c a/(a,a)} s_a.
GroupElement reflection(const AlgebraSpec& spec, const Weight& alpha);
GroupElement translation(const AlgebraSpec& spec, const Weight& mu);
GroupElement compose(const AlgebraSpec& spec, const GroupElement& g, const GroupElement& h);

Weight apply_linear(const AlgebraSpec& spec, const Matrix& y, const Weight& w);
Weight apply(const AlgebraSpec& spec, const GroupElement& g, const Weight& lambda);

int linear_det(const Matrix& y);
// Number of eps coordinates sent to minus an eps coordinate.
int sign_changes(const AlgebraSpec& spec, const Matrix& y);
// p(g): (coordinate sum of the translation in eps letters + sign changes) mod 2.
int extension_parity(const AlgebraSpec& spec, const GroupElement& g);
// det(y) for ordinary families; det(y) * (-1)^p(g) for the extended ones.
int sign(const AlgebraSpec& spec, const GroupElement& g);

struct GroupTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closure of the generators under composition.
std::vector<GroupElement> enumerate_finite_group(const AlgebraSpec& spec, const std::vector<GroupElement>& generators,
                                                 std::size_t cap = 100000);
// Finite Weyl group generated by reflections in the given roots.
std::vector<GroupElement> reflection_group(const AlgebraSpec& spec, const std::vector<Weight>& roots);

// Level-0 even roots of one component (the generators of W', W'' and W^#).
std::vector<Weight> level0_even_roots(const AlgebraSpec& spec, Sub which);

// True when g maps every real-root shadow to a root of the same parity with
// compatible levels.
bool preserves_root_system(const AlgebraSpec& spec, const GroupElement& g);

// One coset t_{mu_y} y + lattice of an affine group, with y fixed.
struct Coset {
  GroupElement base;
  std::vector<Weight> lattice;
};

// hat W' as a union of cosets (one per finite element y); for the extended
// families the whole of hat W_{C_k} = T' x| W(C_k), which contains hat W' with index 2.
std::vector<Coset> affine_prime_group(const AlgebraSpec& spec);
// Representatives of hat W' / W' used by the translation sum; a single
// identity coset over M' except for G(3)^(2).
std::vector<Coset> translation_cosets(const AlgebraSpec& spec);

struct EnumerationCertificate {
  int radius = 0;
  bool certified = false;
  bool fallback = false;
  std::size_t visited = 0;
  std::size_t kept = 0;
  std::string detail;
};

// Height drop of the term moved by g (nullopt: no term at all).
using DropFn = std::function<std::optional<long>(const GroupElement&)>;

struct EnumeratedElements {
  std::vector<GroupElement> elements;
  EnumerationCertificate certificate;
};

// Walks growing l1-shells of the coset lattice and keeps elements with drop <= bound.
// Stops after two consecutive shells lie entirely below the window with a
// nondecreasing minimal drop; otherwise falls back to radius 2*bound+2.
EnumeratedElements enumerate_coset(const AlgebraSpec& spec, const Coset& coset, int bound, const DropFn& drop);
EnumeratedElements enumerate_T_prime(const AlgebraSpec& spec, int bound, const DropFn& drop);
EnumeratedElements enumerate_W_hat_prime(const AlgebraSpec& spec, int bound, const DropFn& drop);

// Integer vectors of l1-norm exactly r in dimension n.
std::vector<std::vector<int>> l1_shell(int n, int r);

}  // namespace superdenom
