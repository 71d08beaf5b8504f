#include "superdenom/series.hpp"

#include <fmt/format.h>

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace superdenom {

namespace {

using Entry = std::pair<Offset, Rational>;

std::vector<Entry> entries_of(const Terms& t) { return {t.begin(), t.end()}; }

void prune(Terms& t) {
  for (auto it = t.begin(); it != t.end();) {
    if (it->second == 0)
      it = t.erase(it);
    else
      ++it;
  }
}

void merge_into(Terms& dst, Terms&& src) {
  for (auto& [o, c] : src) {
    auto [it, fresh] = dst.try_emplace(o, std::move(c));
    if (!fresh) it->second += c;
  }
}

Offset add_step(const Offset& o, const Offset& step, int rank, int times = 1) {
  Offset r = o;
  for (int i = 0; i < rank; ++i) r.c[i] = static_cast<std::int16_t>(r.c[i] + times * step.c[i]);
  return r;
}

// Contributions of the entries [lo, hi) to one multiplication step.
// Positive power: only the shifted part (the identity part is added by the caller).
void step_contrib(const std::vector<Entry>& in, std::size_t lo, std::size_t hi, const Offset& step,
                  int hstep, int sign, bool inverse, int H, int rank, Terms& out, bool& cut) {
  for (std::size_t idx = lo; idx < hi; ++idx) {
    const auto& [o, c] = in[idx];
    int h = o.height(rank);
    if (!inverse) {
      if (h + hstep <= H) {
        Offset o2 = add_step(o, step, rank);
        auto [it, fresh] = out.try_emplace(o2, c);
        if (fresh) {
          if (sign < 0) it->second = -it->second;
        } else if (sign < 0) {
          it->second -= c;
        } else {
          it->second += c;
        }
      } else {
        cut = true;
      }
    } else {
      // (1 + s x)^{-1} = sum_j (-s)^j x^j
      Rational cc = c;
      Offset o2 = o;
      while (h <= H) {
        auto [it, fresh] = out.try_emplace(o2, cc);
        if (!fresh) it->second += cc;
        if (sign > 0) cc = -cc;
        o2 = add_step(o2, step, rank);
        h += hstep;
      }
      cut = true;
    }
  }
}

Terms apply_step(const Terms& in, const Offset& step, int hstep, int sign, bool inverse, int H, int rank,
                 Exec exec, bool& cut) {
  Terms out;
  if (!inverse) out = in;
  auto entries = entries_of(in);
  const std::size_t n = entries.size();
#ifdef _OPENMP
  if (exec == Exec::Parallel && n > 64) {
    int nt = omp_get_max_threads();
    std::vector<Terms> local(nt);
    std::vector<char> cuts(nt, 0);
#pragma omp parallel num_threads(nt)
    {
      int t = omp_get_thread_num();
      std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
      bool c = false;
      step_contrib(entries, lo, hi, step, hstep, sign, inverse, H, rank, local[t], c);
      cuts[t] = c;
    }
    for (int t = 0; t < nt; ++t) {
      merge_into(out, std::move(local[t]));
      cut = cut || cuts[t];
    }
    prune(out);
    return out;
  }
#endif
  (void)exec;
  Terms add;
  step_contrib(entries, 0, n, step, hstep, sign, inverse, H, rank, inverse ? out : add, cut);
  if (!inverse) merge_into(out, std::move(add));
  prune(out);
  return out;
}

Terms apply_factor(Terms t, const RootDirection& dir, int sign, int power, int H, int rank, Exec exec,
                   bool& cut) {
  for (int i = 0; i < std::abs(power); ++i) t = apply_step(t, dir.step, dir.height, sign, power < 0, H, rank, exec, cut);
  return t;
}

std::optional<Offset> offset_from_coords(const std::vector<Rational>& c, int H, bool& above, bool& below) {
  above = below = false;
  Rational h = 0;
  for (const auto& x : c) {
    if (x.get_den() != 1) throw StructuralError("exponent is not in the root lattice of the anchor");
    if (x < 0) above = true;
    h += x;
  }
  if (above) return std::nullopt;
  if (h > H) {
    below = true;
    return std::nullopt;
  }
  Offset o;
  for (std::size_t i = 0; i < c.size(); ++i) o.c[i] = static_cast<std::int16_t>(c[i].get_num().get_si());
  return o;
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::shared_ptr<const SimpleRootBasis> basis, Weight anchor, int height_bound)
    : basis_(std::move(basis)), anchor_(std::move(anchor)), H_(height_bound) {
  rank_ = static_cast<int>(basis_->rank());
  if (rank_ > kMaxRank) throw StructuralError(fmt::format("rank {} exceeds the series limit {}", rank_, kMaxRank));
  if (H_ < 0 || H_ > 30000) throw StructuralError("height bound out of range");
}

TruncatedSeries TruncatedSeries::unit(std::shared_ptr<const SimpleRootBasis> basis, Weight anchor, int H) {
  TruncatedSeries s(std::move(basis), std::move(anchor), H);
  s.terms_.emplace(Offset{}, Rational(1));
  return s;
}

TruncatedSeries TruncatedSeries::monomial(std::shared_ptr<const SimpleRootBasis> basis, Weight anchor, int H,
                                          const Weight& mu, const Rational& c) {
  TruncatedSeries s(std::move(basis), std::move(anchor), H);
  auto coords = s.basis_->decompose(s.anchor_ - mu);
  if (!coords) throw StructuralError("monomial exponent outside the span of the simple roots");
  bool above = false, below = false;
  auto o = offset_from_coords(*coords, H, above, below);
  if (above) throw TruncationOverflow("monomial above the anchor: " + mu.to_string());
  if (below) s.truncated_ = true;
  if (o && c != 0) s.terms_.emplace(*o, c);
  return s;
}

std::optional<Offset> TruncatedSeries::offset_of(const Weight& mu) const {
  auto coords = basis_->decompose(anchor_ - mu);
  if (!coords) return std::nullopt;
  for (const auto& x : *coords)
    if (x.get_den() != 1) return std::nullopt;
  bool above = false, below = false;
  auto o = offset_from_coords(*coords, H_, above, below);
  return o;
}

Weight TruncatedSeries::weight_of(const Offset& o) const {
  Weight w = anchor_;
  for (int i = 0; i < rank_; ++i)
    if (o.c[i] != 0) w -= Rational(o.c[i]) * basis_->roots()[i];
  return w;
}

std::optional<Rational> TruncatedSeries::coefficient(const Weight& mu) const {
  auto o = offset_of(mu);
  if (!o) return std::nullopt;
  return coefficient_at(*o);
}

Rational TruncatedSeries::coefficient_at(const Offset& o) const {
  auto it = terms_.find(o);
  return it == terms_.end() ? Rational(0) : it->second;
}

void TruncatedSeries::add_term(const Offset& o, const Rational& c) {
  if (o.height(rank_) > H_) {
    truncated_ = true;
    return;
  }
  auto [it, fresh] = terms_.try_emplace(o, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else if (c == 0) {
    terms_.erase(it);
  }
}

void TruncatedSeries::require_compatible(const TruncatedSeries& o) const {
  if (!(anchor_ == o.anchor_) || H_ != o.H_ || basis_ != o.basis_)
    throw StructuralError("series with different windows cannot be added");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_compatible(o);
  for (const auto& [off, c] : o.terms_) add_term(off, c);
  truncated_ = truncated_ || o.truncated_;
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  require_compatible(o);
  for (const auto& [off, c] : o.terms_) add_term(off, -c);
  truncated_ = truncated_ || o.truncated_;
  return *this;
}

TruncatedSeries& TruncatedSeries::scale(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [o, x] : terms_) x *= c;
  return *this;
}

TruncatedSeries TruncatedSeries::restricted(int H) const {
  TruncatedSeries s(basis_, anchor_, H);
  s.truncated_ = truncated_;
  for (const auto& [o, c] : terms_) s.add_term(o, c);
  return s;
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const {
  return anchor_ == o.anchor_ && H_ == o.H_ && terms_ == o.terms_;
}

std::vector<Weight> TruncatedSeries::max_support() const {
  if (terms_.empty()) throw std::invalid_argument("max_support of an empty series");
  std::vector<Offset> offs;
  for (const auto& [o, c] : terms_) offs.push_back(o);
  std::sort(offs.begin(), offs.end(),
            [&](const Offset& a, const Offset& b) { return a.height(rank_) < b.height(rank_) || (a.height(rank_) == b.height(rank_) && a < b); });
  std::vector<Offset> maximal;
  for (const auto& o : offs) {
    bool dominated = false;
    for (const auto& m : maximal) {
      bool le = true;
      for (int i = 0; i < rank_ && le; ++i) le = m.c[i] <= o.c[i];
      if (le) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(o);
  }
  std::vector<Weight> out;
  for (const auto& o : maximal) out.push_back(weight_of(o));
  return out;
}

std::string TruncatedSeries::dump() const {
  std::vector<Entry> e = entries_of(terms_);
  std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [o, c] : e) {
    out += "[";
    for (int i = 0; i < rank_; ++i) out += (i ? "," : "") + std::to_string(o.c[i]);
    out += "]\t" + to_pq(c) + "\n";
  }
  return out;
}

RootDirection root_direction(const SimpleRootBasis& basis, const Weight& gamma) {
  auto c = basis.decompose(gamma);
  if (!c) throw StructuralError("factor root outside the root lattice: " + gamma.to_string());
  bool pos = true, neg = true, zero = true;
  for (const auto& x : *c) {
    if (x.get_den() != 1) throw StructuralError("factor root outside the root lattice: " + gamma.to_string());
    if (x < 0) pos = false;
    if (x > 0) neg = false;
    if (x != 0) zero = false;
  }
  if (zero) throw StructuralError("factor root is zero");
  if (!pos && !neg) throw StructuralError("factor root is neither positive nor negative: " + gamma.to_string());
  RootDirection d;
  d.negated = !pos;
  for (std::size_t i = 0; i < c->size(); ++i) {
    long v = (*c)[i].get_num().get_si();
    if (d.negated) v = -v;
    d.step.c[i] = static_cast<std::int16_t>(v);
    d.height += static_cast<int>(v);
  }
  return d;
}

NormalizedTerm normalize(const SimpleRootBasis& basis, const Weight& top, const std::vector<FactorForm>& factors) {
  NormalizedTerm t;
  t.top = top;
  for (const auto& f : factors) {
    RootDirection d = root_direction(basis, f.gamma);
    const int power = f.exponent * f.multiplicity;
    FactorForm g = f;
    if (d.negated) {
      // (1 + s e^{-g}) = s e^{-g} (1 + s e^{g})
      t.top -= Rational(power) * f.gamma;
      if (f.sign < 0 && power % 2 != 0) t.coefficient = -t.coefficient;
      g.gamma = -f.gamma;
    }
    t.factors.emplace_back(d, g);
  }
  return t;
}

TruncatedSeries expand(std::shared_ptr<const SimpleRootBasis> basis, const Weight& anchor, int H,
                       const NormalizedTerm& t, Exec exec) {
  TruncatedSeries s(basis, anchor, H);
  auto coords = basis->decompose(anchor - t.top);
  if (!coords) throw StructuralError("term top outside the span of the simple roots");
  bool above = false, below = false;
  auto o = offset_from_coords(*coords, H, above, below);
  if (above) throw TruncationOverflow("term top above the anchor: " + t.top.to_string());
  if (!o) {
    s.truncated_ = true;
    return s;
  }
  s.terms_.emplace(*o, t.coefficient);
  bool cut = false;
  for (const auto& [d, f] : t.factors)
    s.terms_ = apply_factor(std::move(s.terms_), d, f.sign, f.exponent * f.multiplicity, H, s.rank_, exec, cut);
  s.truncated_ = cut;
  return s;
}

TruncatedSeries mul_factor(const TruncatedSeries& s, const FactorForm& f, Exec exec) {
  RootDirection d = root_direction(*s.basis_, f.gamma);
  const int power = f.exponent * f.multiplicity;
  TruncatedSeries out(s.basis_, s.anchor_, s.H_);
  out.truncated_ = s.truncated_;
  Terms t = s.terms_;
  if (d.negated && power != 0) {
    // Shift every exponent by -power*gamma, i.e. offsets move by -power*step.
    if (power > 0 && s.truncated_)
      throw TruncationOverflow("upward shift of a truncated series would expose missing terms");
    const bool flip = f.sign < 0 && power % 2 != 0;
    Terms shifted;
    for (auto& [o, c] : t) {
      Offset o2 = o;
      bool neg = false;
      int h = 0;
      for (int i = 0; i < s.rank_; ++i) {
        int v = o.c[i] - power * d.step.c[i];
        if (v < 0) neg = true;
        o2.c[i] = static_cast<std::int16_t>(std::clamp(v, -30000, 30000));
        h += v;
      }
      if (neg) throw TruncationOverflow("factor normalization shifts terms above the anchor");
      if (h > s.H_) {
        out.truncated_ = true;
        continue;
      }
      shifted.emplace(o2, flip ? Rational(-c) : c);
    }
    t = std::move(shifted);
  }
  bool cut = false;
  out.terms_ = apply_factor(std::move(t), d, f.sign, power, s.H_, s.rank_, exec, cut);
  out.truncated_ = out.truncated_ || cut;
  return out;
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b, Exec exec) {
  if (a.H_ != b.H_ || a.basis_ != b.basis_) throw StructuralError("series with different windows cannot be multiplied");
  TruncatedSeries out(a.basis_, a.anchor_ + b.anchor_, a.H_);
  out.truncated_ = a.truncated_ || b.truncated_;
  auto ea = entries_of(a.terms_);
  auto eb = entries_of(b.terms_);
  const int rank = a.rank_, H = a.H_;
  auto kernel = [&](std::size_t lo, std::size_t hi, Terms& acc, bool& cut) {
    for (std::size_t i = lo; i < hi; ++i) {
      const int ha = ea[i].first.height(rank);
      for (const auto& [ob, cb] : eb) {
        if (ha + ob.height(rank) > H) {
          cut = true;
          continue;
        }
        Offset o = add_step(ea[i].first, ob, rank);
        Rational c = ea[i].second * cb;
        auto [it, fresh] = acc.try_emplace(o, std::move(c));
        if (!fresh) it->second += c;
      }
    }
  };
  const std::size_t n = ea.size();
#ifdef _OPENMP
  if (exec == Exec::Parallel && n > 16) {
    int nt = omp_get_max_threads();
    std::vector<Terms> local(nt);
    std::vector<char> cuts(nt, 0);
#pragma omp parallel num_threads(nt)
    {
      int t = omp_get_thread_num();
      bool c = false;
      kernel(n * t / nt, n * (t + 1) / nt, local[t], c);
      cuts[t] = c;
    }
    for (auto& l : local) merge_into(out.terms_, std::move(l));
    for (char c : cuts) out.truncated_ = out.truncated_ || c;
    prune(out.terms_);
    return out;
  }
#endif
  (void)exec;
  bool cut = false;
  kernel(0, n, out.terms_, cut);
  out.truncated_ = out.truncated_ || cut;
  prune(out.terms_);
  return out;
}

}  // namespace superdenom
