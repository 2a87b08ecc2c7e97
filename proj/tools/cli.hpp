#pragma once

#include <ostream>

namespace vesflex::cli {

/// Exit codes: 0 success, 1 domain infeasibility, 2 input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vesflex::cli
