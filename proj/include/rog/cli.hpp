#pragma once

#include <iosfwd>

namespace rog::cli {

/// Runs the `rog` tool. Exit codes: 0 success, 1 domain error, 2 I/O or
/// parse error. Reports go to `out` unless --out is given.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace rog::cli
