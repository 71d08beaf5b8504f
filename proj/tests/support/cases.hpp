#pragma once

#include "superdenom/algebra.hpp"

#include <vector>

namespace cases {

struct Case {
  superdenom::Family family;
  int k, l;
};

// Nonzero dual Coxeter number, small ranks.
inline const std::vector<Case>& nonzero_hdual() {
  using F = superdenom::Family;
  static const std::vector<Case> v = {{F::A_2k_2lm1, 1, 1}, {F::A_2km1_2lm1, 2, 1}, {F::A_2l_2km1, 2, 1},
                                      {F::A_2k_2l_4, 2, 1},  {F::D_kp1_l, 2, 1},     {F::C_lp1, 0, 1},
                                      {F::G3, 0, 0}};
  return v;
}

inline const std::vector<Case>& zero_hdual() {
  using F = superdenom::Family;
  static const std::vector<Case> v = {{F::A_2km1_2km1, 2, 0}, {F::A_2k_2k_4, 2, 0}, {F::D_kp1_k, 2, 0}};
  return v;
}

inline std::vector<Case> all_small() {
  auto v = nonzero_hdual();
  for (const auto& c : zero_hdual()) v.push_back(c);
  return v;
}

}  // namespace cases
