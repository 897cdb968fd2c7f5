#pragma once

// JSON inclusion files:
//   {"type": "bratteli", "k": [int], "h": [int], "Lambda": [[int]]}
//   {"type": "dimension_matrix", "D": [[number]]}

#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "minidx/algebra.hpp"
#include "minidx/errors.hpp"

namespace minidx::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalFailure = 2, kScaleCap = 3 };

// Carries the machine-readable code printed in {"error": code, "detail": ...}.
class Failure : public std::runtime_error {
 public:
  Failure(std::string code, const std::string& detail, int exit_code)
      : std::runtime_error(detail), code_(std::move(code)), exit_code_(exit_code) {}

  const std::string& code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string code_;
  int exit_code_;
};

Failure failure_from(const Error& e);
int exit_code_for(Errc code) noexcept;

using Inclusion = std::variant<BratteliInclusion, DimensionMatrix>;

// Throws Failure with code io, parse, schema or a core error name.
Inclusion load_inclusion(const std::string& path);
Inclusion parse_inclusion(const json& doc);

json to_json(const Inclusion& inc);

// Rounds to 12 significant digits; -0 becomes 0.
double round12(double x);
json number(double x);
json vector_json(const Eigen::VectorXd& v);
json matrix_json(const Eigen::MatrixXd& m);
json int_vector_json(const IntVector& v);
json int_matrix_json(const IntMatrix& m);

// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace minidx::cli
