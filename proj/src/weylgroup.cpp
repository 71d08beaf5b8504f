#include "superdenom/weylgroup.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace superdenom {

namespace {

std::vector<Rational> flatten(const Matrix& m) {
  std::vector<Rational> v;
  for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
  return v;
}

int floor_mod_int(const Rational& x, int m) {
  mpz_class q = x.get_num() / x.get_den();
  mpz_class r = q % m;
  if (r < 0) r += m;
  return static_cast<int>(r.get_si());
}

unsigned rotate(unsigned mask, int shift, int m) {
  unsigned out = 0;
  for (int r = 0; r < m; ++r)
    if (mask & (1u << r)) out |= 1u << (((r + shift) % m + m) % m);
  return out;
}

std::optional<std::vector<Rational>> lattice_coords(const AlgebraSpec& spec, const std::vector<Weight>& basis,
                                                    const Weight& v) {
  const int n = spec.dim();
  Matrix a(n, std::vector<Rational>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto c = finite_coords(spec, basis[j]);
    for (int i = 0; i < n; ++i) a[i][j] = c[i];
  }
  return solve_unique(a, finite_coords(spec, v));
}

bool in_lattice(const AlgebraSpec& spec, const std::vector<Weight>& basis, const Weight& v) {
  if (v.is_zero()) return true;
  auto c = lattice_coords(spec, basis, v);
  return c && std::all_of(c->begin(), c->end(), [](const Rational& x) { return x.get_den() == 1; });
}

// Letters carrying the extension lattice: the Delta' block (del for the diagonal family).
bool ext_on_del(const AlgebraSpec& spec) { return spec.family == Family::A_2km1_2km1; }
int ext_count(const AlgebraSpec& spec) { return ext_on_del(spec) ? spec.num_del : spec.num_eps; }
int ext_offset(const AlgebraSpec& spec) { return ext_on_del(spec) ? spec.num_eps : 0; }

GroupElement with_sign(const AlgebraSpec& spec, GroupElement g) {
  g.parity = spec.extended_sign ? extension_parity(spec, g) : 0;
  g.sign = sign(spec, g);
  return g;
}

}  // namespace

GroupElement identity_element(const AlgebraSpec& spec) {
  GroupElement g;
  g.linear = identity_matrix(spec.dim());
  return g;
}

Weight apply_linear(const AlgebraSpec& spec, const Matrix& y, const Weight& w) {
  auto x = multiply(y, finite_coords(spec, w));
  Weight out = from_finite_coords(spec, x);
  out.set(BasisSymbol::delta(), w[BasisSymbol::delta()]);
  out.set(BasisSymbol::lambda0(), w[BasisSymbol::lambda0()]);
  return out;
}

Weight apply(const AlgebraSpec& spec, const GroupElement& g, const Weight& lambda) {
  Weight y = apply_linear(spec, g.linear, lambda);
  if (g.translation.is_zero()) return y;
  const Weight& mu = g.translation;
  const Rational ld = spec.form(lambda, Weight::delta());
  Weight out = y;
  if (ld != 0) out += ld * mu;
  Rational shift = spec.form(y, mu) + spec.form(mu, mu) * ld / 2;
  out -= shift * Weight::delta();
  return out;
}

GroupElement translation(const AlgebraSpec& spec, const Weight& mu) {
  if (!(mu == mu.finite_part())) throw StructuralError("translation vector outside the finite span");
  GroupElement g = identity_element(spec);
  g.translation = mu;
  return with_sign(spec, std::move(g));
}

GroupElement reflection(const AlgebraSpec& spec, const Weight& alpha) {
  if (alpha[BasisSymbol::lambda0()] != 0) throw StructuralError("reflection root has a Lambda0 part");
  const Weight a = alpha.finite_part();
  const Rational c = alpha[BasisSymbol::delta()];
  const Rational aa = spec.form(a, a);
  if (aa == 0) throw StructuralError("reflection in an isotropic root: " + alpha.to_string());
  const int n = spec.dim();
  auto syms = spec.finite_symbols();
  auto ac = finite_coords(spec, a);
  GroupElement g;
  g.linear = identity_matrix(n);
  for (int j = 0; j < n; ++j) {
    Rational f = 2 * spec.form(Weight::of(syms[j]), a) / aa;
    if (f == 0) continue;
    for (int i = 0; i < n; ++i) g.linear[i][j] -= f * ac[i];
  }
  if (c != 0) g.translation = (-2 * c / aa) * a;
  return with_sign(spec, std::move(g));
}

GroupElement compose(const AlgebraSpec& spec, const GroupElement& g, const GroupElement& h) {
  GroupElement r;
  r.linear = multiply(g.linear, h.linear);
  r.translation = g.translation + apply_linear(spec, g.linear, h.translation);
  r.sign = g.sign * h.sign;
  r.parity = (g.parity + h.parity) % 2;
  return r;
}

int linear_det(const Matrix& y) {
  Rational d = determinant(y);
  if (d == 1) return 1;
  if (d == -1) return -1;
  throw StructuralError("linear part is not a signed isometry (det " + to_pq(d) + ")");
}

int sign_changes(const AlgebraSpec& spec, const Matrix& y) {
  int count = 0;
  const int n = ext_count(spec), o = ext_offset(spec);
  for (int j = o; j < o + n; ++j)
    for (int i = o; i < o + n; ++i)
      if (y[i][j] < 0) ++count;
  return count;
}

int extension_parity(const AlgebraSpec& spec, const GroupElement& g) {
  Rational s = 0;
  for (int i = 1; i <= ext_count(spec); ++i) s += g.translation[ext_on_del(spec) ? BasisSymbol::del(i) : BasisSymbol::eps(i)];
  if (s.get_den() != 1) throw StructuralError("translation outside the extension lattice");
  mpz_class v = s.get_num() + sign_changes(spec, g.linear);
  return mpz_odd_p(v.get_mpz_t()) ? 1 : 0;
}

int sign(const AlgebraSpec& spec, const GroupElement& g) {
  int d = linear_det(g.linear);
  if (spec.extended_sign && extension_parity(spec, g) == 1) d = -d;
  return d;
}

std::vector<GroupElement> enumerate_finite_group(const AlgebraSpec& spec, const std::vector<GroupElement>& generators,
                                                 std::size_t cap) {
  using Key = std::pair<std::vector<Rational>, Weight>;
  std::map<Key, std::size_t> seen;
  std::vector<GroupElement> elems{identity_element(spec)};
  elems[0] = with_sign(spec, elems[0]);
  seen[{flatten(elems[0].linear), elems[0].translation}] = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& gen : generators) {
      GroupElement h = compose(spec, gen, elems[i]);
      Key key{flatten(h.linear), h.translation};
      if (seen.count(key)) continue;
      if (elems.size() >= cap) throw GroupTooLarge(fmt::format("group closure exceeds {} elements", cap));
      seen[key] = elems.size();
      elems.push_back(std::move(h));
    }
  }
  return elems;
}

std::vector<GroupElement> reflection_group(const AlgebraSpec& spec, const std::vector<Weight>& roots) {
  std::vector<GroupElement> gens;
  std::set<Weight> seen;
  for (const auto& r : roots) {
    Weight a = r.finite_part();
    if (seen.count(a) || seen.count(-a)) continue;
    seen.insert(a);
    gens.push_back(reflection(spec, a));
  }
  return enumerate_finite_group(spec, gens);
}

std::vector<Weight> level0_even_roots(const AlgebraSpec& spec, Sub which) {
  std::vector<Weight> out;
  for (const auto& p : spec.patterns) {
    if (p.parity != Parity::Even || p.sub != which) continue;
    if (std::find(p.residues.begin(), p.residues.end(), 0) == p.residues.end()) continue;
    out.insert(out.end(), p.finite.begin(), p.finite.end());
  }
  return out;
}

bool preserves_root_system(const AlgebraSpec& spec, const GroupElement& g) {
  for (const auto& [key, mask] : spec.masks) {
    const auto& [parity, w] = key;
    Weight yw = apply_linear(spec, g.linear, w);
    Rational shift = -spec.form(yw, g.translation);
    if (shift.get_den() != 1) return false;
    if (spec.residue_mask(parity, yw) != rotate(mask, floor_mod_int(shift, spec.m), spec.m)) return false;
  }
  return true;
}

std::vector<Coset> affine_prime_group(const AlgebraSpec& spec) {
  auto shadows = subsystem(spec, Sub::Prime).shadows;
  auto Y = reflection_group(spec, shadows);
  std::vector<Coset> out;
  if (spec.extended_sign) {
    // hat W_{C_k} = T' x| W(C_k), signs extended by sgn s_{eps_k} = 1.
    for (const auto& y : Y) out.push_back({with_sign(spec, y), spec.M_prime});
    return out;
  }
  // Representatives of M_rule / M'.
  std::vector<Weight> reps{Weight{}};
  if (spec.M_rule.size() == spec.M_prime.size() && !spec.M_rule.empty()) {
    Rational index = 1;
    {
      Matrix a;
      for (const auto& b : spec.M_prime) {
        auto c = lattice_coords(spec, spec.M_rule, b);
        if (!c) throw StructuralError("M' is not inside the rule lattice");
        a.push_back(*c);
      }
      index = abs(determinant(a));
    }
    const long D = index.get_num().get_si();
    const std::size_t r = spec.M_rule.size();
    long total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= D;
    for (long idx = 1; idx < total; ++idx) {
      long t = idx;
      Weight mu;
      for (std::size_t i = 0; i < r; ++i) {
        mu += Rational(t % D) * spec.M_rule[i];
        t /= D;
      }
      bool fresh = std::none_of(reps.begin(), reps.end(),
                                [&](const Weight& q) { return in_lattice(spec, spec.M_prime, mu - q); });
      if (fresh) reps.push_back(mu);
    }
  }
  for (const auto& y : Y) {
    for (const auto& mu : reps) {
      GroupElement g = mu.is_zero() ? y : compose(spec, translation(spec, mu), y);
      if (preserves_root_system(spec, g)) {
        out.push_back({with_sign(spec, g), spec.M_prime});
        break;
      }
    }
  }
  return out;
}

std::vector<Coset> translation_cosets(const AlgebraSpec& spec) {
  if (spec.extended_sign) return {{identity_element(spec), spec.M_prime}};
  auto full = affine_prime_group(spec);
  auto W0 = reflection_group(spec, level0_even_roots(spec, Sub::Prime));
  std::vector<Coset> reps;
  std::set<std::set<std::vector<Rational>>> seen;
  for (const auto& c : full) {
    std::set<std::vector<Rational>> key;
    for (const auto& w : W0) key.insert(flatten(multiply(c.base.linear, w.linear)));
    if (!seen.insert(key).second) continue;
    reps.push_back(c);
  }
  // Identity first, so the translation sum starts from e^{rho_hat} R itself.
  std::stable_partition(reps.begin(), reps.end(), [&](const Coset& c) {
    return c.base.linear == identity_matrix(spec.dim()) && c.base.translation.is_zero();
  });
  return reps;
}

std::vector<std::vector<int>> l1_shell(int n, int r) {
  std::vector<std::vector<int>> out;
  if (n == 0) {
    if (r == 0) out.push_back({});
    return out;
  }
  std::vector<int> cur(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      if (left == 0) {
        cur[i] = 0;
        out.push_back(cur);
      } else {
        cur[i] = left;
        out.push_back(cur);
        cur[i] = -left;
        out.push_back(cur);
      }
      return;
    }
    for (int v = 0; v <= left; ++v) {
      if (v == 0) {
        cur[i] = 0;
        rec(i + 1, left);
      } else {
        cur[i] = v;
        rec(i + 1, left - v);
        cur[i] = -v;
        rec(i + 1, left - v);
      }
    }
  };
  rec(0, r);
  return out;
}

EnumeratedElements enumerate_coset(const AlgebraSpec& spec, const Coset& coset, int bound, const DropFn& drop) {
  EnumeratedElements res;
  auto& cert = res.certificate;
  const int rank = static_cast<int>(coset.lattice.size());
  // Shells of a reduced basis track the length of mu; skewed bases fool the ray test.
  std::vector<Weight> basis;
  {
    std::vector<std::vector<Rational>> rows;
    for (const auto& b : coset.lattice) rows.push_back(finite_coords(spec, b));
    for (const auto& row : lll_reduce(rows)) basis.push_back(from_finite_coords(spec, row));
  }
  const int needed = std::max(2, rank + 1);
  const int cap = 2 * bound + 2;
  constexpr long kNone = std::numeric_limits<long>::max();
  std::map<std::vector<int>, long> prev;
  int clean_run = 0;
  long shell_min = kNone;
  for (int r = 0;; ++r) {
    std::map<std::vector<int>, long> cur;
    bool clean = r > 0;
    shell_min = kNone;
    for (const auto& n : l1_shell(rank, r)) {
      Weight mu;
      for (int i = 0; i < rank; ++i)
        if (n[i] != 0) mu += Rational(n[i]) * basis[i];
      GroupElement g = mu.is_zero() ? coset.base : compose(spec, translation(spec, mu), coset.base);
      ++cert.visited;
      auto d = drop(g);
      const long v = d ? *d : kNone;
      cur[n] = v;
      shell_min = std::min(shell_min, v);
      if (v <= bound) {
        clean = false;
        res.elements.push_back(std::move(g));
        continue;
      }
      if (r == 0) continue;
      // Some predecessor (one coordinate stepped toward zero) must not drop lower.
      bool rising = false;
      for (int i = 0; i < rank && !rising; ++i) {
        if (n[i] == 0) continue;
        std::vector<int> pred = n;
        pred[i] += n[i] > 0 ? -1 : 1;
        auto it = prev.find(pred);
        rising = it != prev.end() && it->second <= v;
      }
      if (!rising) clean = false;
    }
    cert.radius = r;
    if (rank == 0) {
      cert.certified = true;
      cert.detail = "finite coset";
      break;
    }
    clean_run = clean ? clean_run + 1 : 0;
    if (clean_run == needed) {
      cert.certified = true;
      cert.detail = fmt::format("shells {}..{} below the window and nondecreasing along rays (min drop {})",
                                r - needed + 1, r, shell_min == kNone ? -1 : shell_min);
      break;
    }
    if (r >= cap) {
      cert.fallback = true;
      cert.detail = fmt::format("no monotone certificate; stopped at fallback radius {}", cap);
      break;
    }
    prev = std::move(cur);
  }
  cert.kept = res.elements.size();
  return res;
}

namespace {

EnumeratedElements enumerate_all(const AlgebraSpec& spec, const std::vector<Coset>& cosets, int bound,
                                 const DropFn& drop) {
  EnumeratedElements out;
  out.certificate.certified = true;
  std::vector<std::string> details;
  for (const auto& c : cosets) {
    auto part = enumerate_coset(spec, c, bound, drop);
    out.certificate.radius = std::max(out.certificate.radius, part.certificate.radius);
    out.certificate.certified = out.certificate.certified && part.certificate.certified;
    out.certificate.fallback = out.certificate.fallback || part.certificate.fallback;
    out.certificate.visited += part.certificate.visited;
    if (part.certificate.fallback) details.push_back(part.certificate.detail);
    for (auto& g : part.elements) out.elements.push_back(std::move(g));
  }
  out.certificate.kept = out.elements.size();
  out.certificate.detail = fmt::format("{} coset(s), max radius {}, {} element(s) kept of {} visited{}",
                                       cosets.size(), out.certificate.radius, out.certificate.kept,
                                       out.certificate.visited, details.empty() ? "" : "; " + details.front());
  return out;
}

}  // namespace

EnumeratedElements enumerate_T_prime(const AlgebraSpec& spec, int bound, const DropFn& drop) {
  return enumerate_all(spec, translation_cosets(spec), bound, drop);
}

EnumeratedElements enumerate_W_hat_prime(const AlgebraSpec& spec, int bound, const DropFn& drop) {
  return enumerate_all(spec, affine_prime_group(spec), bound, drop);
}

}  // namespace superdenom
