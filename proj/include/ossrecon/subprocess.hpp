#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ossrecon {

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Raised when a pipeline stage or child process overruns the configured deadline.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  bool timed_out = false;
};

/// Runs argv[0] with execvp semantics (PATH lookup, no shell). stdin is /dev/null.
/// If a deadline is given and expires, the child is killed and timed_out is set.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::optional<std::filesystem::path>& cwd = {},
                          Deadline deadline = {},
                          const std::vector<std::pair<std::string, std::string>>& extra_env = {});

/// Throws TimeoutError if the deadline has already passed.
void check_deadline(Deadline deadline, const std::string& stage);

}  // namespace ossrecon
