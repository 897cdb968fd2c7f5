#include "inclusion_file.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace minidx::cli {

namespace {

Failure schema(const std::string& detail) { return Failure("schema", detail, kInputError); }

void require_exact_keys(const json& doc, const std::set<std::string>& keys) {
  for (const auto& [key, value] : doc.items()) {
    if (!keys.count(key)) throw schema("unexpected field \"" + key + "\"");
  }
  for (const auto& key : keys) {
    if (!doc.contains(key)) throw schema("missing field \"" + key + "\"");
  }
}

IntVector read_int_vector(const json& j, const char* name) {
  if (!j.is_array()) throw schema(std::string(name) + " must be an array of integers");
  IntVector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t p = 0; p < j.size(); ++p) {
    if (!j[p].is_number_integer()) throw schema(std::string(name) + " must hold integers");
    out(static_cast<Eigen::Index>(p)) = j[p].get<std::int64_t>();
  }
  return out;
}

// Rows of a rectangular matrix, each entry checked by `ok`.
template <typename Scalar, typename Check>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> read_matrix(const json& j, const char* name,
                                                                  Check ok) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw schema(std::string(name) + " must be a non-empty array of rows");
  }
  const std::size_t cols = j[0].size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(static_cast<Eigen::Index>(j.size()),
                                                            static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw schema(std::string(name) + " is not rectangular");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!ok(j[r][c])) throw schema(std::string(name) + " has an entry of the wrong type");
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<Scalar>();
    }
  }
  return out;
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::convergence:
    case Errc::integrality:
    case Errc::quasi_basis:
    case Errc::not_central:
    case Errc::law_violation:
      return kNumericalFailure;
    case Errc::scale:
      return kScaleCap;
    default:
      return kInputError;
  }
}

Failure failure_from(const Error& e) {
  return Failure(std::string(errc_name(e.code())), e.what(), exit_code_for(e.code()));
}

Inclusion parse_inclusion(const json& doc) {
  if (!doc.is_object()) throw schema("top level must be an object");
  if (!doc.contains("type") || !doc["type"].is_string()) throw schema("missing string field \"type\"");
  const auto type = doc["type"].get<std::string>();
  try {
    if (type == "bratteli") {
      require_exact_keys(doc, {"type", "k", "h", "Lambda"});
      const IntVector k = read_int_vector(doc["k"], "k");
      const IntVector h = read_int_vector(doc["h"], "h");
      const IntMatrix l = read_matrix<std::int64_t>(doc["Lambda"], "Lambda",
                                                    [](const json& x) { return x.is_number_integer(); });
      return validate_bratteli(k, h, l);
    }
    if (type == "dimension_matrix") {
      require_exact_keys(doc, {"type", "D"});
      return DimensionMatrix(read_matrix<double>(doc["D"], "D",
                                                 [](const json& x) { return x.is_number(); }));
    }
  } catch (const Error& e) {
    throw failure_from(e);
  }
  throw schema("unknown type \"" + type + "\"");
}

Inclusion load_inclusion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("io", "cannot open " + path, kInputError);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Failure("parse", e.what(), kInputError);
  }
  return parse_inclusion(doc);
}

json to_json(const Inclusion& inc) {
  if (const auto* b = std::get_if<BratteliInclusion>(&inc)) {
    return json{{"type", "bratteli"},
                {"k", int_vector_json(b->small().dims())},
                {"h", int_vector_json(b->large().dims())},
                {"Lambda", int_matrix_json(b->lambda())}};
  }
  return json{{"type", "dimension_matrix"},
              {"D", matrix_json(std::get<DimensionMatrix>(inc).entries())}};
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index p = 0; p < v.size(); ++p) out.push_back(number(v(p)));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

json int_vector_json(const IntVector& v) {
  json out = json::array();
  for (Eigen::Index p = 0; p < v.size(); ++p) out.push_back(v(p));
  return out;
}

json int_matrix_json(const IntMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(int_vector_json(m.row(r).transpose()));
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace minidx::cli
