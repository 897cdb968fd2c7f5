#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minidx {

enum class Errc {
  shape,
  consistency,
  non_unital,
  invalid_value,
  not_connected,
  convergence,
  support_mismatch,
  singular_weight,
  not_super_extremal,
  integrality,
  not_markovian,
  bad_density,
  quasi_basis,
  not_central,
  not_in_commutant,
  law_violation,
  scale,
};

// Stable machine-readable name, used verbatim in CLI error lines.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace minidx
