#pragma once

#include "superdenom/lattice.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superdenom {

enum class Family : std::uint8_t {
  A_2k_2lm1,    // A(2k,2l-1)^(2), k>=l
  A_2l_2km1,    // A(2l,2k-1)^(2), k>=l+1
  A_2km1_2lm1,  // A(2k-1,2l-1)^(2), k>=l+1
  A_2lm1_2km1,  // A(2l-1,2k-1)^(2), k>=l
  A_2km1_2km1,  // A(2k-1,2k-1)^(2)
  A_2k_2l_4,    // A(2k,2l)^(4), k>=l+1
  A_2l_2k_4,    // A(2l,2k)^(4), k>=l
  A_2k_2k_4,    // A(2k,2k)^(4)
  D_kp1_l,      // D(k+1,l)^(2), k>=l+1
  D_lp1_k,      // D(l+1,k)^(2), k>=l
  D_kp1_k,      // D(k+1,k)^(2)
  C_lp1,        // C(l+1)^(2)
  G3,           // G(3)^(2)
};

std::string_view family_token(Family f);
std::optional<Family> parse_family(std::string_view token);
const std::vector<std::string>& family_tokens();

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };
enum class Sub : std::uint8_t { None, Prime, DoublePrime };
enum class FqSelector : std::uint8_t { One, AOddSquareInv, AQuarterInv, DPlain };

std::string_view parity_name(Parity p);
std::string_view fq_name(FqSelector s);

// One line of a Table-1 root list: the finite parts `finite` occur at every
// level n with n mod m in `residues`.
struct RootPattern {
  Parity parity = Parity::Even;
  std::vector<int> residues;
  std::vector<Weight> finite;
  Sub sub = Sub::None;
};

struct RootDatum {
  Weight root;
  Parity parity = Parity::Even;
  int multiplicity = 1;
};

struct SubsystemInfo {
  Sub which = Sub::Prime;
  std::string type_label;
  std::vector<Weight> shadows;  // finite parts of the real even roots
  std::vector<Weight> lattice;  // M' or M''
};

struct ValidationReport {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty(); }
};

struct AlgebraSpec {
  Family family = Family::G3;
  int k = 0, l = 0;
  int m = 2;
  int num_eps = 0, num_del = 0;
  BilinearForm form;

  std::vector<Weight> simple_roots;  // alpha_0 first
  std::vector<Parity> simple_parity;
  std::shared_ptr<const SimpleRootBasis> basis;         // eps.., del.., delta
  std::shared_ptr<const SimpleRootBasis> finite_basis;  // eps.., del..

  Weight rho, rho_hat, theta;
  Rational h_dual;
  std::vector<Weight> S;
  int defect = 0;

  std::vector<RootPattern> patterns;
  std::map<std::pair<int, Parity>, int> imaginary_mults;
  std::vector<Weight> M_rule;  // lattice of the (2n/(a,a))a generators
  std::vector<Weight> M_prime, M_doubleprime;
  std::string finite_type, prime_type, doubleprime_type;
  Sub sharp = Sub::Prime;  // component whose Weyl group is W^#
  FqSelector fq = FqSelector::One;
  bool extended_sign = false;
  int imaginary_period = 1;
  std::vector<std::pair<Weight, Parity>> finite_positive;

  int dim() const { return num_eps + num_del; }
  std::vector<BasisSymbol> finite_symbols() const;
  std::string name() const;
  std::string_view token() const { return family_token(family); }
  bool diagonal() const { return h_dual == 0; }

  // Bitmask of residues mod m at which n*delta + w is a root of parity p (0 if never).
  unsigned residue_mask(Parity p, const Weight& w) const;
  // Smallest d | m with the residue set invariant under shifts by d.
  int residue_period(Parity p, const Weight& w) const;

  std::map<std::pair<Parity, Weight>, unsigned> masks;
};

AlgebraSpec build_spec(Family family, int k, int l);

Rational h_dual(const AlgebraSpec& spec);
std::vector<RootDatum> positive_roots(const AlgebraSpec& spec, int max_delta);
std::map<std::pair<int, Parity>, int> imaginary_mults(const AlgebraSpec& spec);
// Number of nonzero real-root shadows in each class (j mod m, parity).
std::map<std::pair<int, Parity>, int> class_counts(const AlgebraSpec& spec);
// (dim even, dim odd) of the underlying finite-dimensional superalgebra.
std::pair<int, int> superalgebra_dims(const AlgebraSpec& spec);
SubsystemInfo subsystem(const AlgebraSpec& spec, Sub which);
ValidationReport validate_spec(const AlgebraSpec& spec);
std::string data_sheet(const AlgebraSpec& spec);

// Finite coordinate vector (eps.., del..) of a weight and back.
std::vector<Rational> finite_coords(const AlgebraSpec& spec, const Weight& w);
Weight from_finite_coords(const AlgebraSpec& spec, const std::vector<Rational>& c);

// True when nothing in the shadow set of the subsystem is moved off the root system by t_mu.
bool translation_preserves_roots(const AlgebraSpec& spec, const Weight& mu);

}  // namespace superdenom
