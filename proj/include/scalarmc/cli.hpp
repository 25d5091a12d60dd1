#pragma once

namespace scalarmc {

// Command dispatch for the scalarmc binary. Returns the process exit code:
// 0 on success, 2 on malformed configuration or usage, 1 on runtime failure.
int run_cli(int argc, const char* const* argv);

}  // namespace scalarmc
