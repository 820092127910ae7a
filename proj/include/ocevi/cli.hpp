#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ocevi {

/// Exit codes: 0 success, 1 data error, 2 usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ocevi
