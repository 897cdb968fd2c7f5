#include "cli.hpp"

#include <cstdlib>
#include <fstream>

#include <CLI11.hpp>

#include "inclusion_file.hpp"
#include "minidx/minindex.hpp"
#include "minidx/multimatrix.hpp"
#include "minidx/realize.hpp"
#include "minidx/spectral.hpp"
#include "reports.hpp"

namespace minidx::cli {

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("MINIDX_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Failure("usage", "MINIDX_SEED must be a non-negative integer", kInputError);
  return v;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f || !(f << text)) throw Failure("io", "cannot write " + path, kInputError);
}

Inclusion compose_inclusions(const Inclusion& inner, const Inclusion& outer) {
  if (inner.index() != outer.index()) {
    throw Failure("schema", "both files must have the same type", kInputError);
  }
  if (const auto* b = std::get_if<BratteliInclusion>(&inner)) {
    return compose(*b, std::get<BratteliInclusion>(outer));
  }
  return compose(std::get<DimensionMatrix>(inner), std::get<DimensionMatrix>(outer));
}

std::string inclusion_line(const BratteliInclusion& b) {
  return "k=" + int_vector_json(b.small().dims()).dump() +
         " h=" + int_vector_json(b.large().dims()).dump() +
         " Lambda=" + int_matrix_json(b.lambda()).dump() + "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal index toolkit for multi-matrix inclusions", "minidx"};
  app.set_version_flag("--version", std::string("minidx ") + MINIDX_VERSION);
  app.require_subcommand(1);

  std::string path, path_b, out_path;
  double tol = kDefaultPfTol;
  bool as_json = false, as_text = false;

  auto* validate = app.add_subcommand("validate", "Check an inclusion file");
  validate->add_option("path", path, "Inclusion file")->required();

  auto* analyze = app.add_subcommand("analyze", "Minimal index, expectation and states");
  analyze->add_option("path", path, "Inclusion file")->required();
  auto* json_flag = analyze->add_flag("--json", as_json, "JSON report (default)");
  analyze->add_flag("--text", as_text, "Aligned text table")->excludes(json_flag);
  analyze->add_option("--tol", tol, "Perron-Frobenius tolerance")->check(CLI::PositiveNumber);

  auto* compose_cmd = app.add_subcommand("compose", "Composite of N⊂M (first) and M⊂L (second)");
  compose_cmd->add_option("inner", path, "Inclusion file for N⊂M")->required();
  compose_cmd->add_option("outer", path_b, "Inclusion file for M⊂L")->required();
  compose_cmd->add_option("--out", out_path, "Write the composite here");

  std::int64_t target = 1;
  EnumerationBounds bounds;
  bool enum_json = false;
  auto* enumerate = app.add_subcommand("enumerate", "Super-extremal inclusions of a given index");
  enumerate->add_option("--index", target, "Target index")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--max-summands", bounds.max_summands)->check(CLI::PositiveNumber);
  enumerate->add_option("--max-entry", bounds.max_entry)->check(CLI::PositiveNumber);
  enumerate->add_option("--max-dim", bounds.max_dim)->check(CLI::PositiveNumber);
  enumerate->add_flag("--json", enum_json, "JSON array of inclusion files");

  std::uint64_t seed = 0;
  int restarts = kDefaultRestarts;
  double verify_tol = 1e-3;
  auto* verify = app.add_subcommand("verify", "Check the closed form against the oracle");
  verify->add_option("path", path, "Bratteli inclusion file")->required();
  auto* seed_opt = verify->add_option("--seed", seed, "Oracle seed (default $MINIDX_SEED or 0)");
  verify->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  verify->add_option("--tol", verify_tol, "Largest accepted deviation")->check(CLI::NonNegativeNumber);

  std::vector<std::string> argv_store{"minidx"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << json{{"error", "usage"}, {"detail", e.what()}}.dump() << "\n";
    return kInputError;
  }

  try {
    if (*validate) {
      load_inclusion(path);
      out << "OK\n";
    } else if (*analyze) {
      const json report = analyze_report(load_inclusion(path), tol);
      out << (as_text ? text_table(report) : dump(report));
    } else if (*compose_cmd) {
      const Inclusion inner = load_inclusion(path);
      const Inclusion outer = load_inclusion(path_b);
      const Inclusion composite = compose_inclusions(inner, outer);
      json summary = compose_summary(inner, outer, composite);
      if (out_path.empty()) {
        summary["composite"] = to_json(composite);
      } else {
        write_file(out_path, dump(to_json(composite)));
      }
      out << dump(summary);
    } else if (*enumerate) {
      const auto found = enumerate_super_extremal(target, bounds);
      if (enum_json) {
        json list = json::array();
        for (const auto& b : found) list.push_back(to_json(b));
        out << dump(list);
      } else {
        for (const auto& b : found) out << inclusion_line(b);
      }
    } else if (*verify) {
      if (!*seed_opt) seed = default_seed();
      const Inclusion inc = load_inclusion(path);
      const auto* b = std::get_if<BratteliInclusion>(&inc);
      if (!b) throw Failure("schema", "verify needs a bratteli file", kInputError);
      const VerifyResult r = verify_report(*b, seed, restarts, verify_tol);
      out << dump(r.report);
      if (!r.passed) {
        err << json{{"error", "convergence"},
                    {"detail", "numerical oracle deviates from the closed form by more than tol"}}
                   .dump()
            << "\n";
        return kNumericalFailure;
      }
      return kOk;
    }
  } catch (const Failure& f) {
    err << json{{"error", f.code()}, {"detail", f.what()}}.dump() << "\n";
    return f.exit_code();
  } catch (const Error& e) {
    const Failure f = failure_from(e);
    err << json{{"error", f.code()}, {"detail", f.what()}}.dump() << "\n";
    return f.exit_code();
  }
  return kOk;
}

}  // namespace minidx::cli
