#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsmooth {

// Command-line front door. Exit codes: 0 success, 2 precondition/domain
// violations (message names the failed check), 1 internal failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsmooth
