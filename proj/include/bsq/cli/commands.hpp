#pragma once
// bsqlab command line: run, verify, twin, sweep, report, plot-data.
//
// Exit codes: 0 success, 1 I/O or usage failure, 2 configuration error,
// 3 numerical abort (CFL or non-finite state), 4 verification failure.

#include <string>
#include <vector>

namespace bsq::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kConfigError = 2,
  kNumericalAbort = 3,
  kVerificationFailed = 4,
};

// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "BSQLAB_OUTPUT_ROOT";

int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace bsq::cli
