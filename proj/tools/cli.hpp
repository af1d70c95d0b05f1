#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cxhess::cli {

// Exit codes: 0 success / all checks pass, 1 a check failed or a computation
// was rejected, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cxhess::cli
