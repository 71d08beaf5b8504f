#pragma once

#include "superdenom/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

std::vector<SuiteResult> run_properties(std::size_t cases, std::uint64_t seed);

SuiteResult form_invariance(std::size_t cases, std::uint64_t seed);
SuiteResult sign_multiplicativity(std::size_t cases, std::uint64_t seed);
SuiteResult translation_composition(std::size_t cases, std::uint64_t seed);
SuiteResult reflection_involution(std::size_t cases, std::uint64_t seed);
SuiteResult series_ring_axioms(std::size_t cases, std::uint64_t seed);
SuiteResult truncation_coherence(std::size_t cases, std::uint64_t seed);

}  // namespace props
