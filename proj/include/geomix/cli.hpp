#pragma once

#include <ostream>

namespace geomix {

/// Entry point of the `geomix` tool. Returns 0 on success, 2 on a usage error and 1 on
/// a data or convergence error (message on `err`).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geomix
