#pragma once

#include <string>
#include <vector>

namespace decbench {

struct ProcessResult {
  int exit_code = 0;
  /// Combined stdout and stderr, truncated to the last kMaxCapture bytes.
  std::string output;

  static constexpr std::size_t kMaxCapture = 64 * 1024;
};

/// Runs argv[0] (looked up in PATH) with the given arguments. No shell is
/// involved. A process killed by a signal reports exit code 128 + signo.
/// Throws Error(kIo) when the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace decbench
