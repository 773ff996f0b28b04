#pragma once

#include <ostream>

namespace wps::cli {

/// Runs one command line. Returns 0 on success, 2 on usage errors and 1
/// on input or computation errors. Results go to files named by --out (or
/// `out` when absent); diagnostics and the resolved configuration go to
/// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wps::cli
