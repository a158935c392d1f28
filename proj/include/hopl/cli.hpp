#pragma once

#include <iosfwd>

namespace hopl {

/// Entry point of the `hopl` command; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopl
