#pragma once

namespace fatigue {

/// Entry point of the `fatigue` command line tool. Subcommands: simulate,
/// sweep, verify, oracle-check. Returns the process exit status.
int run_cli(int argc, char** argv);

}  // namespace fatigue
