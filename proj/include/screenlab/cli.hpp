#pragma once

namespace screenlab {

/// Parse argv, dispatch to the subcommand, and map failures to exit codes:
/// 0 success, 2 config/usage error, 3 numeric or solver failure,
/// 4 reproduction-assertion failure.
int run_cli(int argc, const char* const* argv);

}  // namespace screenlab
