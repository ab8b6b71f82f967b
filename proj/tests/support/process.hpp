#pragma once

#include <string>

namespace transduct::testing {

struct ProcessResult {
  int exit_code = -1;
  std::string out;  // stdout only
};

// Runs `command` through the shell and captures its stdout.
ProcessResult run_process(const std::string& command);

// Single-quoted for /bin/sh.
std::string shell_quote(const std::string& arg);

}  // namespace transduct::testing
