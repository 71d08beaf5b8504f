#pragma once

#include "superdenom/series.hpp"
#include "superdenom/weylgroup.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace superdenom {

// Anchor rho_hat + (sum of positive finite odd roots), H = depth + ht(anchor - rho_hat).
struct Window {
  Weight anchor;
  int depth = 0;
  int H = 0;
  int delta_height = 0;
  int q_depth = 0;  // floor(depth / ht(delta))
};
Window make_window(const AlgebraSpec& spec, int depth);

// Coefficients of q^0..q^n, q = e^{-delta}.
using QSeries = std::vector<Rational>;

// Corrected: odd exponents 1,3,5,...; Printed: 3,5,7,... (negative control only).
enum class FVariant { Corrected, Printed };
QSeries f_q(const AlgebraSpec& spec, int depth, FVariant variant = FVariant::Corrected);
QSeries reciprocal(const QSeries& f);

struct UnsupportedForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Positive roots of height <= bound as denominator factors (1 -+ e^{-a})^{+-mult}.
std::vector<FactorForm> affine_factors(const AlgebraSpec& spec, int bound);
// Factors of the finite denominator R.
std::vector<FactorForm> finite_factors(const AlgebraSpec& spec);

TruncatedSeries build_lhs(const AlgebraSpec& spec, const Window& w, Exec exec = Exec::Serial);

struct RhsOptions {
  Exec exec = Exec::Serial;
  bool apply_f = true;
  FVariant f_variant = FVariant::Corrected;
  std::optional<std::pair<int, Rational>> f_override;  // replace one q-coefficient
  std::optional<std::size_t> drop_element;              // index into the kept elements
  std::optional<std::size_t> flip_sign;
};

struct RhsResult {
  TruncatedSeries series;
  EnumerationCertificate certificate;
  std::vector<GroupElement> elements;
};

// f(q) * sum over T' (or hat W'/W' coset reps) of sgn(t) t(e^{rho_hat} R).
RhsResult build_rhs_translation_sum(const AlgebraSpec& spec, const Window& w, const RhsOptions& opt = {});
// f(q) * sum over hat W' of sgn(w) w(e^{rho_hat} / prod_S (1 + e^{-beta})).
RhsResult build_rhs_isotropic_sum(const AlgebraSpec& spec, const Window& w, const RhsOptions& opt = {});

// Multiplies by a q-series; q^n shifts every exponent by -n delta.
// f must vanish off multiples of period; q^period acts as e^{-period*delta}
TruncatedSeries mul_q(const TruncatedSeries& s, const QSeries& f, const Weight& delta, int period = 1);

struct CheckResult {
  bool pass = false;
  std::string detail;
  bool operator==(const CheckResult&) const = default;
};

struct Mismatch {
  std::string weight, lhs, rhs;
  bool operator==(const Mismatch&) const = default;
};

struct VerificationReport {
  std::string family;
  int k = 0, l = 0, depth = 0, q_depth = 0;
  std::string anchor;
  std::string status;
  std::size_t lhs_terms = 0, rhs_terms = 0;
  std::vector<Mismatch> mismatches;
  std::map<std::string, CheckResult> checks;

  bool operator==(const VerificationReport&) const = default;
};

// Coefficient-by-coefficient comparison over the union of supports.
std::vector<Mismatch> compare(const TruncatedSeries& a, const TruncatedSeries& b);

CheckResult casimir_support_check(const AlgebraSpec& spec, const std::vector<const TruncatedSeries*>& sides);

struct RatioResult {
  QSeries quotient;
  std::vector<std::string> escaping;  // support outside rho + Z delta
  CheckResult check;
};
// e^{-rho} Rhat^{-1} F_{T'}(e^{rho} R), compared with 1/f(q).
RatioResult ratio_invariant(const AlgebraSpec& spec, int depth, Exec exec = Exec::Serial);

struct FiniteIdentity {
  TruncatedSeries lhs, rhs;
  std::size_t group_order = 0;
  CheckResult check;
};
// e^rho R = sum_{w in W^#} sgn(w) w(e^rho / prod_S (1 + e^{-beta})) over the finite root lattice.
FiniteIdentity finite_identity_check(const AlgebraSpec& spec, int depth, Exec exec = Exec::Serial);

CheckResult root_count_report(const AlgebraSpec& spec);

struct VerifyOptions {
  Exec exec = Exec::Serial;
  bool isotropic = true;
  bool casimir = true;
  bool ratio = true;
  RhsOptions rhs;
};
VerificationReport verify(const AlgebraSpec& spec, int depth, const VerifyOptions& opt = {});

}  // namespace superdenom
