#include "superdenom/denominator.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>

namespace superdenom {

namespace {

int integral_height(const SimpleRootBasis& basis, const Weight& v, const char* what) {
  auto c = basis.decompose(v);
  if (!c) throw StructuralError(fmt::format("{} outside the span of the simple roots", what));
  Rational h = height(*c);
  if (h.get_den() != 1) throw StructuralError(fmt::format("{} has non-integral height {}", what, to_pq(h)));
  return static_cast<int>(h.get_num().get_si());
}

Weight odd_sum(const AlgebraSpec& spec) {
  Weight sb;
  for (const auto& [w, p] : spec.finite_positive)
    if (p == Parity::Odd) sb += w;
  return sb;
}

FactorForm denominator_factor(const Weight& root, Parity p, int mult) {
  if (p == Parity::Even) return {root, -1, 1, mult};
  return {root, 1, -1, mult};
}

// One closed-form term: e^{top} prod factors, to be moved by group elements.
struct Base {
  Weight top;
  std::vector<FactorForm> factors;
};

NormalizedTerm moved(const AlgebraSpec& spec, const SimpleRootBasis& basis, const Base& base, const GroupElement& g) {
  std::vector<FactorForm> fs;
  fs.reserve(base.factors.size());
  for (auto f : base.factors) {
    f.gamma = apply(spec, g, f.gamma);
    fs.push_back(std::move(f));
  }
  return normalize(basis, apply(spec, g, base.top), fs);
}

DropFn drop_fn(const AlgebraSpec& spec, const Window& w, const Base& base) {
  return [&spec, &w, &base](const GroupElement& g) -> std::optional<long> {
    NormalizedTerm t = moved(spec, *spec.basis, base, g);
    auto c = spec.basis->decompose(w.anchor - t.top);
    if (!c) throw StructuralError("moved term outside the root lattice window");
    Rational h = height(*c);
    if (h.get_den() != 1) throw StructuralError("moved term at non-integral height " + to_pq(h));
    return h.get_num().get_si();
  };
}

TruncatedSeries sum_terms(const AlgebraSpec& spec, const Window& w, const Base& base,
                          const std::vector<GroupElement>& elems, const RhsOptions& opt) {
  const long n = static_cast<long>(elems.size());
  auto coeff_sign = [&](long i) {
    int s = elems[i].sign;
    if (opt.flip_sign && *opt.flip_sign == static_cast<std::size_t>(i)) s = -s;
    return s;
  };
  auto skip = [&](long i) { return opt.drop_element && *opt.drop_element == static_cast<std::size_t>(i); };

  TruncatedSeries total(spec.basis, w.anchor, w.H);
  if (opt.exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) {
      if (skip(i)) continue;
      auto t = expand(spec.basis, w.anchor, w.H, moved(spec, *spec.basis, base, elems[i]));
      total += t.scale(coeff_sign(i));
    }
    return total;
  }
  const int nt = omp_get_max_threads();
  std::vector<TruncatedSeries> partial(nt, total);
  std::vector<std::string> errors(nt);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const int tid = omp_get_thread_num();
    if (skip(i) || !errors[tid].empty()) continue;
    try {
      auto t = expand(spec.basis, w.anchor, w.H, moved(spec, *spec.basis, base, elems[i]));
      partial[tid] += t.scale(coeff_sign(i));
    } catch (const std::exception& e) {
      errors[tid] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw TruncationOverflow(e);
  for (auto& p : partial) total += p;
  return total;
}

QSeries effective_f(const AlgebraSpec& spec, const Window& w, const RhsOptions& opt) {
  QSeries f = f_q(spec, w.q_depth, opt.f_variant);
  if (opt.f_override) {
    auto [n, c] = *opt.f_override;
    if (n >= 0 && n < static_cast<int>(f.size())) f[n] = c;
  }
  return f;
}

bool is_one(const QSeries& f) {
  if (f.empty() || f[0] != 1) return false;
  return std::all_of(f.begin() + 1, f.end(), [](const Rational& c) { return c == 0; });
}

}  // namespace

Window make_window(const AlgebraSpec& spec, int depth) {
  if (depth < 1) throw StructuralError("depth must be >= 1");
  Window w;
  w.depth = depth;
  Weight sb = odd_sum(spec);
  w.anchor = spec.rho_hat + sb;
  w.H = depth + (sb.is_zero() ? 0 : integral_height(*spec.basis, sb, "sum of odd roots"));
  w.delta_height = integral_height(*spec.basis, Weight::delta(), "delta");
  w.q_depth = depth / w.delta_height;
  return w;
}

QSeries f_q(const AlgebraSpec& spec, int depth, FVariant variant) {
  QSeries c(depth + 1, Rational(0));
  c[0] = 1;
  if (spec.fq == FqSelector::One) return c;
  const int first = variant == FVariant::Corrected ? 1 : 3;
  for (int e = first; e <= depth; e += 2) {
    switch (spec.fq) {
      case FqSelector::AOddSquareInv:  // (1 - q^e)^{-2}
        for (int rep = 0; rep < 2; ++rep)
          for (int i = e; i <= depth; ++i) c[i] += c[i - e];
        break;
      case FqSelector::AQuarterInv:  // (1 + q^e)^{-1}
        for (int i = e; i <= depth; ++i) c[i] -= c[i - e];
        break;
      case FqSelector::DPlain:  // (1 - q^e)
        for (int i = depth; i >= e; --i) c[i] -= c[i - e];
        break;
      case FqSelector::One:
        break;
    }
  }
  return c;
}

QSeries reciprocal(const QSeries& f) {
  if (f.empty() || f[0] == 0) throw StructuralError("q-series without a unit constant term");
  QSeries g(f.size(), Rational(0));
  g[0] = 1 / f[0];
  for (std::size_t n = 1; n < f.size(); ++n) {
    Rational s = 0;
    for (std::size_t i = 1; i <= n; ++i) s += f[i] * g[n - i];
    g[n] = -s / f[0];
  }
  return g;
}

TruncatedSeries mul_q(const TruncatedSeries& s, const QSeries& f, const Weight& delta, int period) {
  if (is_one(f)) return s;
  for (std::size_t n = 0; n < f.size(); ++n)
    if (f[n] != 0 && n % period != 0)
      throw UnsupportedForm(fmt::format("q^{} with imaginary period {}", n, period));
  auto dc = s.basis()->decompose(period * delta);
  if (!dc || !is_nonneg_integral(*dc)) throw StructuralError("imaginary period is not in Q^+");
  Offset step;
  for (int i = 0; i < s.rank(); ++i) step.c[i] = static_cast<std::int16_t>((*dc)[i].get_num().get_si());
  const int hd = step.height(s.rank());
  TruncatedSeries out(s.basis(), s.anchor(), s.height_bound());
  if (s.truncated()) out.set_truncated();
  for (const auto& [o, c] : s.terms()) {
    const int h0 = o.height(s.rank());
    for (std::size_t n = 0; n < f.size(); n += period) {
      if (f[n] == 0) continue;
      const int m = static_cast<int>(n) / period;
      if (h0 + m * hd > s.height_bound()) {
        out.set_truncated();
        break;
      }
      Offset o2 = o;
      for (int i = 0; i < s.rank(); ++i) o2.c[i] = static_cast<std::int16_t>(o2.c[i] + m * step.c[i]);
      out.add_term(o2, f[n] * c);
    }
  }
  return out;
}

std::vector<FactorForm> affine_factors(const AlgebraSpec& spec, int bound) {
  std::vector<FactorForm> out;
  for (const auto& r : positive_roots(spec, bound)) {
    auto c = spec.basis->decompose(r.root);
    if (!c || height(*c) > bound) continue;
    out.push_back(denominator_factor(r.root, r.parity, r.multiplicity));
  }
  return out;
}

std::vector<FactorForm> finite_factors(const AlgebraSpec& spec) {
  std::vector<FactorForm> out;
  for (const auto& [w, p] : spec.finite_positive) out.push_back(denominator_factor(w, p, 1));
  return out;
}

TruncatedSeries build_lhs(const AlgebraSpec& spec, const Window& w, Exec exec) {
  auto t = normalize(*spec.basis, spec.rho_hat, affine_factors(spec, w.depth));
  return expand(spec.basis, w.anchor, w.H, t, exec);
}

RhsResult build_rhs_translation_sum(const AlgebraSpec& spec, const Window& w, const RhsOptions& opt) {
  Base base{spec.rho_hat, finite_factors(spec)};
  auto en = enumerate_T_prime(spec, w.H, drop_fn(spec, w, base));
  RhsResult res{sum_terms(spec, w, base, en.elements, opt), en.certificate, std::move(en.elements)};
  if (opt.apply_f) res.series = mul_q(res.series, effective_f(spec, w, opt), Weight::delta(), spec.imaginary_period);
  return res;
}

RhsResult build_rhs_isotropic_sum(const AlgebraSpec& spec, const Window& w, const RhsOptions& opt) {
  if (spec.family == Family::A_2km1_2km1)
    throw UnsupportedForm("isotropic-sum form is not defined for " + spec.name());
  Base base{spec.rho_hat, {}};
  for (const auto& b : spec.S) base.factors.push_back({b, 1, -1, 1});
  auto en = enumerate_W_hat_prime(spec, w.H, drop_fn(spec, w, base));
  RhsResult res{sum_terms(spec, w, base, en.elements, opt), en.certificate, std::move(en.elements)};
  // Extended families sum over hat W_{C_k}, which counts every hat W' term twice.
  if (spec.extended_sign) res.series.scale(Rational(1, 2));
  if (opt.apply_f) res.series = mul_q(res.series, effective_f(spec, w, opt), Weight::delta(), spec.imaginary_period);
  return res;
}

std::vector<Mismatch> compare(const TruncatedSeries& a, const TruncatedSeries& b) {
  std::vector<Offset> keys;
  for (const auto& [o, c] : a.terms())
    if (b.coefficient_at(o) != c) keys.push_back(o);
  for (const auto& [o, c] : b.terms())
    if (!a.terms().count(o)) keys.push_back(o);
  const int r = a.rank();
  std::sort(keys.begin(), keys.end(), [r](const Offset& x, const Offset& y) {
    int hx = x.height(r), hy = y.height(r);
    return hx != hy ? hx < hy : x < y;
  });
  std::vector<Mismatch> out;
  for (const auto& o : keys)
    out.push_back({a.weight_of(o).to_string(), to_pq(a.coefficient_at(o)), to_pq(b.coefficient_at(o))});
  return out;
}

CheckResult casimir_support_check(const AlgebraSpec& spec, const std::vector<const TruncatedSeries*>& sides) {
  const Rational target = spec.form(spec.rho_hat, spec.rho_hat);
  std::size_t total = 0, bad = 0;
  std::string witness;
  for (const auto* s : sides) {
    const int r = s->rank();
    const auto& roots = s->basis()->roots();
    // (a - sum c_i alpha_i)^2 from the Gram matrix, without rebuilding weights.
    std::vector<Rational> b(r);
    std::vector<std::vector<Rational>> G(r, std::vector<Rational>(r));
    for (int i = 0; i < r; ++i) {
      b[i] = spec.form(s->anchor(), roots[i]);
      for (int j = 0; j < r; ++j) G[i][j] = spec.form(roots[i], roots[j]);
    }
    const Rational aa = spec.form(s->anchor(), s->anchor());
    for (const auto& [o, c] : s->terms()) {
      ++total;
      Rational v = aa;
      for (int i = 0; i < r; ++i) {
        if (o.c[i] == 0) continue;
        v -= 2 * o.c[i] * b[i];
        for (int j = 0; j < r; ++j)
          if (o.c[j] != 0) v += G[i][j] * o.c[i] * o.c[j];
      }
      if (v != target) {
        if (bad++ == 0) witness = s->weight_of(o).to_string();
      }
    }
  }
  CheckResult res;
  res.pass = bad == 0;
  res.detail = bad == 0 ? fmt::format("{} support weights on the shell (mu,mu)={}", total, to_pq(target))
                        : fmt::format("{} of {} weights off the shell, e.g. {}", bad, total, witness);
  return res;
}

RatioResult ratio_invariant(const AlgebraSpec& spec, int depth, Exec exec) {
  if (!spec.diagonal()) throw UnsupportedForm("ratio invariant applies to h_dual = 0 families only");
  Window w = make_window(spec, depth);
  RhsOptions opt;
  opt.exec = exec;
  opt.apply_f = false;
  auto x = build_rhs_translation_sum(spec, w, opt).series;
  for (auto f : affine_factors(spec, w.H)) {
    f.exponent = -f.exponent;
    x = mul_factor(x, f, exec);
  }
  RatioResult res;
  res.quotient.assign(w.q_depth + 1, Rational(0));
  for (const auto& [o, c] : x.terms()) {
    Weight d = x.weight_of(o) - spec.rho_hat;
    Rational n = -d[BasisSymbol::delta()];
    if (!(d == Weight::delta(-n)) || n.get_den() != 1 || n < 0) {
      res.escaping.push_back(d.to_string());
      continue;
    }
    long ni = n.get_num().get_si();
    if (ni <= w.q_depth) res.quotient[ni] = c;
  }
  std::sort(res.escaping.begin(), res.escaping.end());
  QSeries expect = reciprocal(f_q(spec, w.q_depth));
  std::vector<std::string> diffs;
  for (int n = 0; n <= w.q_depth; ++n)
    if (res.quotient[n] != expect[n])
      diffs.push_back(fmt::format("q^{}: {} vs {}", n, to_pq(res.quotient[n]), to_pq(expect[n])));
  res.check.pass = res.escaping.empty() && diffs.empty();
  if (!res.escaping.empty())
    res.check.detail = fmt::format("{} term(s) outside Z delta, e.g. {}", res.escaping.size(), res.escaping.front());
  else if (!diffs.empty())
    res.check.detail = fmt::format("quotient differs from 1/f(q): {}", diffs.front());
  else
    res.check.detail = fmt::format("support in Z delta; equals 1/f(q) through q^{}", w.q_depth);
  return res;
}

FiniteIdentity finite_identity_check(const AlgebraSpec& spec, int depth, Exec exec) {
  const auto& basis = spec.finite_basis;
  Weight sb = odd_sum(spec);
  Weight anchor = spec.rho + sb;
  const int H = depth + (sb.is_zero() ? 0 : integral_height(*basis, sb, "sum of odd roots"));
  auto lhs = expand(basis, anchor, H, normalize(*basis, spec.rho, finite_factors(spec)), exec);
  auto group = reflection_group(spec, level0_even_roots(spec, spec.sharp));
  TruncatedSeries rhs(basis, anchor, H);
  for (const auto& g : group) {
    std::vector<FactorForm> fs;
    for (const auto& b : spec.S) fs.push_back({apply_linear(spec, g.linear, b), 1, -1, 1});
    auto t = expand(basis, anchor, H, normalize(*basis, apply_linear(spec, g.linear, spec.rho), fs), exec);
    rhs += t.scale(linear_det(g.linear));
  }
  FiniteIdentity res{lhs, rhs, group.size(), {}};
  auto mm = compare(lhs, rhs);
  res.check.pass = mm.empty();
  res.check.detail = mm.empty() ? fmt::format("{} terms agree at height <= {} (|W#|={})", lhs.size(), H, group.size())
                                : fmt::format("{} mismatches, first at {}: {} vs {}", mm.size(), mm[0].weight,
                                              mm[0].lhs, mm[0].rhs);
  return res;
}

CheckResult root_count_report(const AlgebraSpec& spec) {
  auto counts = class_counts(spec);
  auto mults = spec.imaginary_mults;
  auto [d0, d1] = superalgebra_dims(spec);
  std::vector<std::string> fails;
  auto get = [](const auto& m, int j, Parity p) {
    auto it = m.find({j, p});
    return it == m.end() ? 0 : it->second;
  };
  for (Parity p : {Parity::Even, Parity::Odd}) {
    int total = 0;
    for (int j = 0; j < spec.m; ++j) total += get(counts, j, p) + get(mults, j, p);
    int want = p == Parity::Even ? d0 : d1;
    if (total != want) fails.push_back(fmt::format("bookkeeping {}: {} != dim {}", parity_name(p), total, want));
  }
  const int k = spec.k;
  struct Expect {
    const char* what;
    int j;
    Parity p;
    bool mult;
    int value;
  };
  std::vector<Expect> ex;
  const auto E = Parity::Even, O = Parity::Odd;
  switch (spec.family) {
    case Family::A_2km1_2km1:
      ex = {{"|D0^(0)|", 0, E, false, 4 * k * k - 2 * k}, {"|D0^(1)|", 1, E, false, 4 * k * k - 2 * k},
            {"|D1^(0)|", 0, O, false, 4 * k * k},         {"|D1^(1)|", 1, O, false, 4 * k * k},
            {"dim h", 0, E, true, 2 * k},                 {"dim g_delta", 1, E, true, 2 * k - 2}};
      break;
    case Family::A_2k_2k_4:
      ex = {{"|D0^(0)|", 0, E, false, 4 * k * k}, {"|D0^(2)|", 2, E, false, 4 * k * k},
            {"|D0^(1)|", 1, E, false, 2 * k},     {"|D0^(3)|", 3, E, false, 2 * k},
            {"|D1^(0)|", 0, O, false, 4 * k * k + 2 * k}, {"|D1^(2)|", 2, O, false, 4 * k * k + 2 * k},
            {"|D1^(1)|", 1, O, false, 2 * k},     {"|D1^(3)|", 3, O, false, 2 * k},
            {"dim h", 0, E, true, 2 * k},         {"dim g_2delta", 2, E, true, 2 * k},
            {"dim g_delta", 1, O, true, 1},       {"dim g_3delta", 3, O, true, 1}};
      break;
    case Family::D_kp1_k:
      ex = {{"|D0^(0)|", 0, E, false, 4 * k * k}, {"|D0^(1)|", 1, E, false, 2 * k},
            {"|D1^(0)|", 0, O, false, 4 * k * k + 2 * k}, {"|D1^(1)|", 1, O, false, 2 * k},
            {"dim h", 0, E, true, 2 * k},         {"dim g_delta", 1, E, true, 1}};
      break;
    default:
      break;
  }
  for (const auto& e : ex) {
    int got = e.mult ? get(mults, e.j, e.p) : get(counts, e.j, e.p);
    if (got != e.value) fails.push_back(fmt::format("{} = {}, expected {}", e.what, got, e.value));
  }
  CheckResult res;
  res.pass = fails.empty();
  if (fails.empty())
    res.detail = fmt::format("bookkeeping balances (dim {}|{}){}", d0, d1,
                             ex.empty() ? "" : fmt::format(", {} class counts match", ex.size()));
  else
    res.detail = fails.front();
  return res;
}

VerificationReport verify(const AlgebraSpec& spec, int depth, const VerifyOptions& opt) {
  Window w = make_window(spec, depth);
  VerificationReport rep;
  rep.family = std::string(spec.token());
  rep.k = spec.k;
  rep.l = spec.l;
  rep.depth = depth;
  rep.q_depth = w.q_depth;
  rep.anchor = w.anchor.to_string();

  RhsOptions ro = opt.rhs;
  ro.exec = opt.exec;
  auto lhs = build_lhs(spec, w, opt.exec);
  auto rhs = build_rhs_translation_sum(spec, w, ro);
  rep.lhs_terms = lhs.size();
  rep.rhs_terms = rhs.series.size();
  rep.mismatches = compare(lhs, rhs.series);

  const auto& cert = rhs.certificate;
  rep.checks["enumeration"] = {cert.certified || cert.fallback,
                               fmt::format("{} element(s); {}", rhs.elements.size(), cert.detail)};
  if (!spec.diagonal()) {
    auto c = rhs.series.coefficient(spec.rho_hat);
    bool ok = c && *c == 1;
    rep.checks["rho_hat_coefficient"] = {ok, fmt::format("coefficient of e^rho_hat is {}", c ? to_pq(*c) : "n/a")};
  }
  if (opt.casimir) rep.checks["casimir"] = casimir_support_check(spec, {&lhs, &rhs.series});
  if (opt.isotropic) {
    try {
      RhsOptions io;
      io.exec = opt.exec;
      auto iso = build_rhs_isotropic_sum(spec, w, io);
      RhsOptions plain;
      plain.exec = opt.exec;
      const auto& reference = ro.drop_element || ro.flip_sign || ro.f_override || ro.f_variant != FVariant::Corrected
                                  ? build_rhs_translation_sum(spec, w, plain).series
                                  : rhs.series;
      auto mm = compare(reference, iso.series);
      rep.checks["isotropic_sum"] = {
          mm.empty(), mm.empty() ? fmt::format("{} terms agree ({} element(s) of hat W')", iso.series.size(),
                                               iso.elements.size())
                                 : fmt::format("{} mismatches, first at {}", mm.size(), mm[0].weight)};
    } catch (const UnsupportedForm& e) {
      rep.checks["isotropic_sum"] = {true, std::string("unsupported: ") + e.what()};
    }
  }
  if (opt.ratio && spec.diagonal()) rep.checks["ratio"] = ratio_invariant(spec, depth, opt.exec).check;

  bool ok = rep.mismatches.empty();
  for (const auto& [name, c] : rep.checks) ok = ok && c.pass;
  rep.status = ok ? "match" : "mismatch";
  return rep;
}

}  // namespace superdenom
