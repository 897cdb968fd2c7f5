#pragma once

#include <cstdint>

#include "inclusion_file.hpp"

namespace minidx::cli {

// Largest Σ h_i² accepted by verify.
inline constexpr std::int64_t kVerifyScaleCap = 256;

// Connected input: the full report. Disconnected input: connected, components,
// d, minimal_index, index_class and one full report per block under
// "per_component" (each with its "rows" and "cols").
json analyze_report(const Inclusion& inc, double tol);

// Key/value table, one line per top-level key.
std::string text_table(const json& report);

struct VerifyResult {
  json report;
  bool passed = false;
};

// Throws Error(scale) when Σ h_i² exceeds kVerifyScaleCap.
VerifyResult verify_report(const BratteliInclusion& b, std::uint64_t seed, int restarts,
                           double tol);

// d, d₁·d₂ and the slack d₁·d₂ − d of a composite.
json compose_summary(const Inclusion& inner, const Inclusion& outer, const Inclusion& composite);

}  // namespace minidx::cli
