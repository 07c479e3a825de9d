#pragma once

namespace qsa {

// Entry point of the qsa-lab command line. Returns the process exit status:
// 0 success, 1 runtime error, 2 config error, 3 divergence.
int run_cli(int argc, char** argv);

}  // namespace qsa
