#pragma once

#include <ostream>

namespace winding::cli {

/// Entry point shared by the binary and the tests. Returns the process exit
/// code: 0 success, 1 usage or IO error, 2 verification or diagnostic failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace winding::cli
