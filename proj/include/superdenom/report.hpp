#pragma once

#include "superdenom/denominator.hpp"

#include <string>

namespace superdenom {

// Schema-stable JSON (keys in schema order, rationals as "p/q").
std::string to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);

// One verdict line, then a mismatch table and the checks.
std::string to_text(const VerificationReport& r, bool color = false, std::size_t max_rows = 20);

}  // namespace superdenom
