#pragma once

// Command implementations behind the heatstring executable. Kept in a library
// so the tests can drive them without spawning processes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace heatstring::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailed = 2;

struct CommandOptions {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

// Runs one command and returns the process exit status:
// 0 success or pass, 1 usage or configuration error, 2 failed check or
// numerical failure. Progress goes to `out`, diagnostics to `err`.
int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

bool is_known_command(const std::string& name);

}  // namespace heatstring::cli
