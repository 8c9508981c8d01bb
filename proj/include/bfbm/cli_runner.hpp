#pragma once

namespace bfbm {

// Parses argv and dispatches to the library. Returns the process exit
// status: 0 success, 1 verification failure, 2 usage or runtime error.
int run_cli(int argc, char** argv);

}  // namespace bfbm
