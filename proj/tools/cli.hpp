#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csd::cli {

/// Runs `csdtool` with the given arguments (program name excluded).
/// Returns 0 on success, 1 on a data or runtime error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace csd::cli
