#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superdenom {

using Rational = mpq_class;
using Matrix = std::vector<std::vector<Rational>>;

// Always "p/q", also for integers ("3/1").
std::string to_pq(const Rational& r);
Rational parse_rational(const std::string& s);

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SymKind : std::uint8_t { Eps = 0, Del = 1, Delta = 2, Lambda0 = 3 };

struct BasisSymbol {
  SymKind kind = SymKind::Eps;
  int index = 0;

  static BasisSymbol eps(int i) { return {SymKind::Eps, i}; }
  static BasisSymbol del(int j) { return {SymKind::Del, j}; }
  static BasisSymbol delta() { return {SymKind::Delta, 0}; }
  static BasisSymbol lambda0() { return {SymKind::Lambda0, 0}; }

  std::string name() const;
  auto operator<=>(const BasisSymbol&) const = default;
};

class Weight {
 public:
  Weight() = default;

  static Weight of(BasisSymbol s, const Rational& c = 1);
  static Weight eps(int i, const Rational& c = 1) { return of(BasisSymbol::eps(i), c); }
  static Weight del(int j, const Rational& c = 1) { return of(BasisSymbol::del(j), c); }
  static Weight delta(const Rational& c = 1) { return of(BasisSymbol::delta(), c); }
  static Weight lambda0(const Rational& c = 1) { return of(BasisSymbol::lambda0(), c); }

  Rational operator[](BasisSymbol s) const;
  void set(BasisSymbol s, const Rational& c);
  const std::map<BasisSymbol, Rational>& coords() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  // Copy with the delta and Lambda0 coordinates removed.
  Weight finite_part() const;

  Weight& operator+=(const Weight& o);
  Weight& operator-=(const Weight& o);
  Weight& operator*=(const Rational& s);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(const Rational& s, Weight a) { return a *= s; }
  friend Weight operator*(int s, Weight a) { return a *= Rational(s); }
  Weight operator-() const;
  bool operator==(const Weight& o) const { return c_ == o.c_; }
  bool operator<(const Weight& o) const { return c_ < o.c_; }

  // "coef*symbol" terms in symbol order, e.g. "3/1*Lambda0" style pieces joined by " + ".
  std::string to_string() const;

 private:
  std::map<BasisSymbol, Rational> c_;
};

class BilinearForm {
 public:
  BilinearForm() = default;
  BilinearForm(std::vector<Rational> eps_diag, std::vector<Rational> del_diag);

  Rational operator()(const Weight& a, const Weight& b) const;
  Rational pair(BasisSymbol a, BasisSymbol b) const;
  int num_eps() const { return static_cast<int>(eps_.size()); }
  int num_del() const { return static_cast<int>(del_.size()); }

 private:
  void check(BasisSymbol s) const;
  std::vector<Rational> eps_, del_;
};

// Coordinates of weights over an ordered list of simple roots. The span symbols
// must have the same count as the roots; the inverse coordinate matrix is cached.
class SimpleRootBasis {
 public:
  SimpleRootBasis(std::vector<Weight> roots, std::vector<BasisSymbol> span);

  std::optional<std::vector<Rational>> decompose(const Weight& v) const;
  Weight recompose(const std::vector<Rational>& c) const;
  const std::vector<Weight>& roots() const { return roots_; }
  std::size_t rank() const { return roots_.size(); }

 private:
  std::vector<Weight> roots_;
  std::vector<BasisSymbol> span_;
  Matrix inv_;
};

Rational height(const std::vector<Rational>& c);
bool is_nonneg_integral(const std::vector<Rational>& c);
bool dominates(const SimpleRootBasis& b, const Weight& mu, const Weight& nu);

std::optional<Matrix> inverse(Matrix a);
Rational determinant(Matrix a);
std::optional<std::vector<Rational>> solve_unique(Matrix a, std::vector<Rational> rhs);
Matrix identity_matrix(std::size_t n);
Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<Rational> multiply(const Matrix& a, const std::vector<Rational>& v);

// Row-style lattice basis (Hermite form, upper triangular) of the Z-span of vectors.
std::vector<std::vector<Rational>> lattice_basis(const std::vector<std::vector<Rational>>& gens);
// LLL-reduced basis (delta = 3/4, standard dot product) of the same lattice; input must be independent.
std::vector<std::vector<Rational>> lll_reduce(std::vector<std::vector<Rational>> basis);

}  // namespace superdenom
