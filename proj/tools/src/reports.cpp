#include "reports.hpp"

#include <algorithm>
#include <sstream>

#include "minidx/minindex.hpp"
#include "minidx/multimatrix.hpp"
#include "minidx/realize.hpp"
#include "minidx/spectral.hpp"

namespace minidx::cli {

namespace {

constexpr double kClassifyTol = 1e-9;

json index_class_json(double x) {
  const IndexClass c = classify_index_value(x, kClassifyTol);
  if (const auto k = jones_k(c)) return json{{"jones_k", *k}};
  if (std::holds_alternative<AtLeastFour>(c)) return "at_least_four";
  return "inadmissible";
}

DimensionMatrix dimension_of(const Inclusion& inc) {
  if (const auto* b = std::get_if<BratteliInclusion>(&inc)) return dimension_matrix_of(*b);
  return std::get<DimensionMatrix>(inc);
}

json connected_report(const Inclusion& inc, double tol) {
  const DimensionMatrix d = dimension_of(inc);
  const PFData pf = pf_data(d, tol);
  const auto weights = minimal_expectation_weights(d, pf);
  const auto states = canonical_states(d, pf);
  const double index = pf.d * pf.d;

  json out{{"connected", true},
           {"components", 1},
           {"d", number(pf.d)},
           {"minimal_index", number(index)},
           {"index_class", index_class_json(index)},
           {"sqrt_mu", vector_json(pf.sqrt_mu)},
           {"sqrt_nu", vector_json(pf.sqrt_nu)},
           {"lambda_min", matrix_json(weights.lambda)},
           {"omega_left", vector_json(states.left)},
           {"omega_right", vector_json(states.right)},
           {"spherical", matrix_json(states.spherical)}};

  if (const auto* b = std::get_if<BratteliInclusion>(&inc)) {
    const MarkovTrace tau = markov_trace(*b, tol);
    const ExtremalityReport ext = extremality_report(*b);
    out["markov_s"] = vector_json(tau.s);
    out["markov_t"] = vector_json(tau.t);
    out["extremal"] = ext.extremal;
    out["super_extremal"] = ext.super_extremal;
    out["super_extremal_index"] = ext.index ? json(*ext.index) : json(nullptr);
  }
  return out;
}

json index_list(const std::vector<Eigen::Index>& v) {
  json out = json::array();
  for (const auto x : v) out.push_back(x);
  return out;
}

}  // namespace

json analyze_report(const Inclusion& inc, double tol) {
  const DimensionMatrix d = dimension_of(inc);
  const auto components = connected_components(d);
  if (components.size() == 1) return connected_report(inc, tol);

  json parts = json::array();
  double top = 0.0;
  for (const auto& c : components) {
    const Inclusion piece = std::visit(
        [&](const auto& x) -> Inclusion { return restrict_to(x, c); }, inc);
    json r = connected_report(piece, tol);
    top = std::max(top, r["d"].get<double>());
    r["rows"] = index_list(c.rows);
    r["cols"] = index_list(c.cols);
    parts.push_back(std::move(r));
  }
  const double dd = scalar_dimension(d, tol);
  return json{{"connected", false},
              {"components", components.size()},
              {"d", number(dd)},
              {"minimal_index", number(dd * dd)},
              {"index_class", index_class_json(dd * dd)},
              {"per_component", std::move(parts)}};
}

std::string text_table(const json& report) {
  std::size_t width = 0;
  for (const auto& [key, value] : report.items()) width = std::max(width, key.size());
  std::ostringstream os;
  for (const auto& [key, value] : report.items()) {
    os << key << std::string(width - key.size() + 2, ' ') << value.dump() << "\n";
  }
  return os.str();
}

VerifyResult verify_report(const BratteliInclusion& b, std::uint64_t seed, int restarts,
                           double tol) {
  const std::int64_t size = b.large().algebraic_dimension();
  if (size > kVerifyScaleCap) {
    std::ostringstream os;
    os << "M has dimension " << size << ", above the cap of " << kVerifyScaleCap;
    throw Error(Errc::scale, os.str());
  }
  if (!is_connected(b)) throw Error(Errc::not_connected, "verify needs a connected inclusion");

  const DimensionMatrix d = dimension_matrix_of(b);
  const double closed = minimal_index(d);
  const auto weights = minimal_expectation_weights(d);

  const ConcreteInclusion c = realize_inclusion(b);
  const NumericalMinimum oracle = minimize_index_numerically(c, restarts, seed);
  const CentralIndex qb = quasi_basis_index(minimal_expectation(c));
  const CentralIndex formula = index_of_expectation(d, weights);

  const double lambda_dev = (oracle.lambda - weights.lambda).cwiseAbs().maxCoeff();
  const double value_dev = std::abs(oracle.value - closed);
  const double qb_dev = (qb.values - formula.values).cwiseAbs().maxCoeff();
  const double max_dev = std::max(lambda_dev, value_dev);

  VerifyResult out;
  out.passed = max_dev <= tol && qb_dev <= tol;
  out.report = json{{"closed_form_minimal_index", number(closed)},
                    {"oracle_value", number(oracle.value)},
                    {"lambda_closed_form", matrix_json(weights.lambda)},
                    {"lambda_oracle", matrix_json(oracle.lambda)},
                    {"max_abs_deviation", number(max_dev)},
                    {"quasi_basis_vs_formula_deviation", number(qb_dev)},
                    {"seed", seed},
                    {"restarts", restarts},
                    {"tol", number(tol)},
                    {"passed", out.passed}};
  return out;
}

json compose_summary(const Inclusion& inner, const Inclusion& outer, const Inclusion& composite) {
  const double d1 = scalar_dimension(dimension_of(inner));
  const double d2 = scalar_dimension(dimension_of(outer));
  const double d = scalar_dimension(dimension_of(composite));
  return json{{"d", number(d)},
              {"d1_times_d2", number(d1 * d2)},
              {"submultiplicativity_slack", number(d1 * d2 - d)}};
}

}  // namespace minidx::cli
