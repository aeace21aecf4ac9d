#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ratelab {

// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 numeric/solver error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ratelab
