#pragma once

namespace scanpath {
namespace cli {

// Command-line entry point. Exit codes: 0 success (including --help and
// --version), 1 bad input or usage, 2 internal invariant failure.
int run(int argc, const char* const* argv);

}  // namespace cli
}  // namespace scanpath
