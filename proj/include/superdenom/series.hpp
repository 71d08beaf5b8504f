#pragma once

#include "superdenom/lattice.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace superdenom {

inline constexpr int kMaxRank = 16;

// Nonnegative simple-root coordinates of anchor - exponent.
struct Offset {
  std::array<std::int16_t, kMaxRank> c{};

  int height(int rank) const {
    int h = 0;
    for (int i = 0; i < rank; ++i) h += c[i];
    return h;
  }
  bool operator==(const Offset&) const = default;
  auto operator<=>(const Offset&) const = default;
};

struct OffsetHash {
  std::size_t operator()(const Offset& o) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : o.c) {
      h ^= static_cast<std::uint16_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

using Terms = std::unordered_map<Offset, Rational, OffsetHash>;

enum class Exec { Serial, Parallel };

struct TruncationOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (1 + sign e^{-gamma})^(exponent * multiplicity)
struct FactorForm {
  Weight gamma;
  int sign = -1;
  int exponent = 1;
  int multiplicity = 1;
};

class TruncatedSeries {
 public:
  TruncatedSeries(std::shared_ptr<const SimpleRootBasis> basis, Weight anchor, int height_bound);

  static TruncatedSeries unit(std::shared_ptr<const SimpleRootBasis> basis, Weight anchor, int H);
  // c * e^{mu} in the window of (anchor, H); throws TruncationOverflow when mu is above the anchor.
  static TruncatedSeries monomial(std::shared_ptr<const SimpleRootBasis> basis, Weight anchor, int H,
                                  const Weight& mu, const Rational& c = 1);

  const Weight& anchor() const { return anchor_; }
  int height_bound() const { return H_; }
  int rank() const { return rank_; }
  const std::shared_ptr<const SimpleRootBasis>& basis() const { return basis_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  // True once any term has been cut off by the height bound.
  bool truncated() const { return truncated_; }

  // nullopt means the weight lies outside the window.
  std::optional<Offset> offset_of(const Weight& mu) const;
  Weight weight_of(const Offset& o) const;
  std::optional<Rational> coefficient(const Weight& mu) const;
  Rational coefficient_at(const Offset& o) const;

  void add_term(const Offset& o, const Rational& c);
  void set_truncated() { truncated_ = true; }
  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& scale(const Rational& c);
  // Drop terms above a smaller height bound.
  TruncatedSeries restricted(int H) const;

  std::vector<Weight> max_support() const;
  // One line per term: "[o1,o2,...]<TAB>p/q", sorted by offset.
  std::string dump() const;

  bool operator==(const TruncatedSeries& o) const;

 private:
  void require_compatible(const TruncatedSeries& o) const;

  std::shared_ptr<const SimpleRootBasis> basis_;
  Weight anchor_;
  int H_ = 0;
  int rank_ = 0;
  Terms terms_;
  bool truncated_ = false;

  friend TruncatedSeries mul_factor(const TruncatedSeries&, const FactorForm&, Exec);
  friend TruncatedSeries mul(const TruncatedSeries&, const TruncatedSeries&, Exec);
  friend TruncatedSeries expand(std::shared_ptr<const SimpleRootBasis>, const Weight&, int, const struct NormalizedTerm&,
                                Exec);
};

// Multiplies by one factor. A negative gamma is first rewritten as
// sign e^{-gamma} (1 + sign e^{gamma}); the resulting upward shift of a
// truncated series, or a shift above the anchor, throws TruncationOverflow.
TruncatedSeries mul_factor(const TruncatedSeries& s, const FactorForm& f, Exec exec = Exec::Serial);
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b, Exec exec = Exec::Serial);

// Positive-root coordinates of gamma (all >= 0), or of -gamma with negated=true.
struct RootDirection {
  Offset step;
  int height = 0;
  bool negated = false;
};
RootDirection root_direction(const SimpleRootBasis& basis, const Weight& gamma);

// Closed-form product e^{top} * prod factors, normalized so that every factor is
// in a positive root, and expanded inside the window.
struct NormalizedTerm {
  Weight top;
  Rational coefficient = 1;
  std::vector<std::pair<RootDirection, FactorForm>> factors;
};
NormalizedTerm normalize(const SimpleRootBasis& basis, const Weight& top, const std::vector<FactorForm>& factors);
TruncatedSeries expand(std::shared_ptr<const SimpleRootBasis> basis, const Weight& anchor, int H,
                       const NormalizedTerm& t, Exec exec = Exec::Serial);

}  // namespace superdenom
