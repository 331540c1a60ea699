#pragma once

#include <iosfwd>
#include <stop_token>
#include <string>
#include <vector>

namespace ledgernet::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

/// Cancellation wired to signals by the executable. `stop` lets in-flight
/// download chunks finish; `abort` abandons them.
struct Runtime {
  std::stop_token stop;
  std::stop_token abort;
};

/// Runs one subcommand (download | build | analyze | compare | report).
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Runtime& runtime = {});

}  // namespace ledgernet::cli
