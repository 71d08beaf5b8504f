#include "superdenom/lattice.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace superdenom {

std::string to_pq(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

std::string BasisSymbol::name() const {
  switch (kind) {
    case SymKind::Eps: return fmt::format("eps{}", index);
    case SymKind::Del: return fmt::format("del{}", index);
    case SymKind::Delta: return "delta";
    case SymKind::Lambda0: return "Lambda0";
  }
  return "?";
}

Weight Weight::of(BasisSymbol s, const Rational& c) {
  Weight w;
  w.set(s, c);
  return w;
}

Rational Weight::operator[](BasisSymbol s) const {
  auto it = c_.find(s);
  return it == c_.end() ? Rational(0) : it->second;
}

void Weight::set(BasisSymbol s, const Rational& c) {
  if (c == 0)
    c_.erase(s);
  else
    c_[s] = c;
}

Weight Weight::finite_part() const {
  Weight w = *this;
  w.c_.erase(BasisSymbol::delta());
  w.c_.erase(BasisSymbol::lambda0());
  return w;
}

Weight& Weight::operator+=(const Weight& o) {
  for (const auto& [s, c] : o.c_) set(s, (*this)[s] + c);
  return *this;
}

Weight& Weight::operator-=(const Weight& o) {
  for (const auto& [s, c] : o.c_) set(s, (*this)[s] - c);
  return *this;
}

Weight& Weight::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& [k, c] : c_) c *= s;
  return *this;
}

Weight Weight::operator-() const {
  Weight w = *this;
  for (auto& [k, c] : w.c_) c = -c;
  return w;
}

std::string Weight::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (const auto& [s, c] : c_) {
    if (!out.empty()) out += " + ";
    out += to_pq(c) + "*" + s.name();
  }
  return out;
}

BilinearForm::BilinearForm(std::vector<Rational> eps_diag, std::vector<Rational> del_diag)
    : eps_(std::move(eps_diag)), del_(std::move(del_diag)) {}

void BilinearForm::check(BasisSymbol s) const {
  if (s.kind == SymKind::Eps && (s.index < 1 || s.index > num_eps()))
    throw StructuralError("unknown basis symbol " + s.name());
  if (s.kind == SymKind::Del && (s.index < 1 || s.index > num_del()))
    throw StructuralError("unknown basis symbol " + s.name());
}

Rational BilinearForm::pair(BasisSymbol a, BasisSymbol b) const {
  check(a);
  check(b);
  if ((a.kind == SymKind::Delta && b.kind == SymKind::Lambda0) ||
      (a.kind == SymKind::Lambda0 && b.kind == SymKind::Delta))
    return 1;
  if (a != b) return 0;
  if (a.kind == SymKind::Eps) return eps_[a.index - 1];
  if (a.kind == SymKind::Del) return del_[a.index - 1];
  return 0;
}

Rational BilinearForm::operator()(const Weight& a, const Weight& b) const {
  Rational s = 0;
  for (const auto& [sa, ca] : a.coords()) {
    check(sa);
    if (sa.kind == SymKind::Delta) {
      s += ca * b[BasisSymbol::lambda0()];
    } else if (sa.kind == SymKind::Lambda0) {
      s += ca * b[BasisSymbol::delta()];
    } else {
      Rational cb = b[sa];
      if (cb != 0) s += ca * cb * pair(sa, sa);
    }
  }
  for (const auto& [sb, cb] : b.coords()) check(sb);
  return s;
}

SimpleRootBasis::SimpleRootBasis(std::vector<Weight> roots, std::vector<BasisSymbol> span)
    : roots_(std::move(roots)), span_(std::move(span)) {
  if (roots_.size() != span_.size())
    throw StructuralError("simple roots do not match the coordinate span");
  const std::size_t n = roots_.size();
  Matrix a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = roots_[j][span_[i]];
  for (const auto& r : roots_)
    for (const auto& [s, c] : r.coords())
      if (std::find(span_.begin(), span_.end(), s) == span_.end())
        throw StructuralError("simple root outside the coordinate span: " + r.to_string());
  auto inv = inverse(a);
  if (!inv) throw StructuralError("simple roots are linearly dependent");
  inv_ = std::move(*inv);
}

std::optional<std::vector<Rational>> SimpleRootBasis::decompose(const Weight& v) const {
  std::vector<Rational> x(span_.size());
  std::size_t seen = 0;
  for (std::size_t i = 0; i < span_.size(); ++i) {
    x[i] = v[span_[i]];
    if (x[i] != 0) ++seen;
  }
  if (seen != v.coords().size()) return std::nullopt;
  return multiply(inv_, x);
}

Weight SimpleRootBasis::recompose(const std::vector<Rational>& c) const {
  Weight w;
  for (std::size_t i = 0; i < c.size() && i < roots_.size(); ++i)
    if (c[i] != 0) w += c[i] * roots_[i];
  return w;
}

Rational height(const std::vector<Rational>& c) {
  return std::accumulate(c.begin(), c.end(), Rational(0));
}

bool is_nonneg_integral(const std::vector<Rational>& c) {
  return std::all_of(c.begin(), c.end(),
                     [](const Rational& x) { return x >= 0 && x.get_den() == 1; });
}

bool dominates(const SimpleRootBasis& b, const Weight& mu, const Weight& nu) {
  auto c = b.decompose(mu - nu);
  return c && is_nonneg_integral(*c);
}

Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

std::optional<Matrix> inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv = identity_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

Rational determinant(Matrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

std::optional<std::vector<Rational>> solve_unique(Matrix a, std::vector<Rational> rhs) {
  const std::size_t rows = a.size();
  if (rows == 0) return std::vector<Rational>{};
  const std::size_t cols = a[0].size();
  for (std::size_t i = 0; i < rows; ++i) a[i].push_back(rhs[i]);
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational f = a[r][c];
    for (auto& x : a[r]) x /= f;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational g = a[i][c];
      for (std::size_t j = c; j <= cols; ++j) a[i][j] -= g * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (a[i][cols] != 0) return std::nullopt;
  if (piv.size() != cols) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a[i][cols];
  return x;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  Matrix c(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

std::vector<Rational> multiply(const Matrix& a, const std::vector<Rational>& v) {
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
  return out;
}

std::vector<std::vector<Rational>> lattice_basis(const std::vector<std::vector<Rational>>& gens) {
  if (gens.empty()) return {};
  const std::size_t n = gens[0].size();
  mpz_class scale = 1;
  for (const auto& g : gens)
    for (const auto& x : g) scale = lcm(scale, mpz_class(x.get_den()));
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& g : gens) {
    std::vector<mpz_class> r(n);
    bool nz = false;
    for (std::size_t i = 0; i < n; ++i) {
      Rational s = g[i] * Rational(scale);
      r[i] = s.get_num();
      nz = nz || r[i] != 0;
    }
    if (nz) rows.push_back(std::move(r));
  }
  std::vector<std::vector<mpz_class>> basis;
  for (std::size_t col = 0; col < n && !rows.empty(); ++col) {
    // Euclid on the column until at most one row has a nonzero entry.
    while (true) {
      std::vector<std::size_t> nz;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][col] != 0) nz.push_back(i);
      if (nz.size() <= 1) break;
      std::size_t best = nz[0];
      for (auto i : nz)
        if (abs(rows[i][col]) < abs(rows[best][col])) best = i;
      for (auto i : nz) {
        if (i == best) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t());
        for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[best][j];
      }
      rows.erase(std::remove_if(rows.begin(), rows.end(),
                                [](const auto& r) {
                                  return std::all_of(r.begin(), r.end(),
                                                     [](const mpz_class& x) { return x == 0; });
                                }),
                 rows.end());
    }
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r[col] != 0; });
    if (it == rows.end()) continue;
    auto p = *it;
    rows.erase(it);
    if (p[col] < 0)
      for (auto& x : p) x = -x;
    basis.push_back(std::move(p));
  }
  // Reduce entries above the pivots into [0, pivot).
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::size_t pc = 0;
    while (basis[i][pc] == 0) ++pc;
    for (std::size_t r = 0; r < i; ++r) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), basis[r][pc].get_mpz_t(), basis[i][pc].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < n; ++j) basis[r][j] -= q * basis[i][j];
    }
  }
  std::vector<std::vector<Rational>> out;
  for (const auto& b : basis) {
    std::vector<Rational> v(n);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = Rational(b[j], scale);
      v[j].canonicalize();
    }
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational round_nearest(const Rational& x) {
  mpz_class f;
  Rational shifted = x + Rational(1, 2);
  mpz_fdiv_q(f.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return Rational(f);
}

}  // namespace

std::vector<std::vector<Rational>> lll_reduce(std::vector<std::vector<Rational>> b) {
  const std::size_t n = b.size();
  if (n <= 1) return b;
  std::vector<std::vector<Rational>> bs(n);
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  std::vector<Rational> norm(n);
  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bs[j]) / norm[j];
        for (std::size_t t = 0; t < bs[i].size(); ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      norm[i] = dot(bs[i], bs[i]);
      if (norm[i] == 0) throw StructuralError("lll_reduce: dependent basis");
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      Rational q = round_nearest(mu[k][j]);
      if (q == 0) continue;
      for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[j][t];
      gram_schmidt();
    }
    if (norm[k] >= (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

}  // namespace superdenom
