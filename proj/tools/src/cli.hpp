#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace minidx::cli {

// `minidx validate|analyze|compose|enumerate|verify ...`; args excludes the
// program name. Returns the process exit code (0 ok, 1 input error,
// 2 numerical failure, 3 scale cap).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minidx::cli
