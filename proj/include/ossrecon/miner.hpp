#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ossrecon/subprocess.hpp"
#include "ossrecon/util.hpp"

namespace ossrecon {

/// One mined commit. Diff statistics are line counts against the first parent.
struct Commit {
  std::string hash;
  UnixSeconds author_timestamp = 0;
  std::string message;  // full message; first line is the subject
  std::int64_t additions = 0;
  std::int64_t deletions = 0;
  bool is_merge = false;

  std::string_view subject() const {
    auto nl = message.find('\n');
    return std::string_view(message).substr(0, nl == std::string::npos ? message.size() : nl);
  }
};

/// Commits reachable from one tag but from no earlier tag. The trailing
/// "unreleased" window (commits after the last tag) carries unreleased = true.
struct ReleaseWindow {
  int ordinal = 0;
  std::string tag_name;
  UnixSeconds tag_timestamp = 0;
  bool unreleased = false;
  std::vector<Commit> commits;
};

struct ReleaseSet {
  std::vector<ReleaseWindow> windows;          // tagged releases, ordinals 0..n-1
  std::optional<ReleaseWindow> unreleased;     // present iff commits exist past the last tag
  bool no_tags = false;                        // warning flag, not an error
};

struct MiningSummary {
  double repo_age_days = 0.0;        // now - first commit timestamp
  UnixSeconds last_updated = 0;      // latest commit timestamp
  int release_count = 0;
  double avg_days_between_releases = 0.0;  // 0 when release_count < 2
  std::int64_t total_commits = 0;

  bool operator==(const MiningSummary&) const = default;
};

class MinerError : public std::runtime_error {
 public:
  enum class Kind {
    NotARepository,
    UnreachableRemote,
    CloneFailed,
    ShallowRepository,
    GitFailed,
  };

  MinerError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Local working copy of a repository, ready for history mining.
struct RepoHandle {
  std::filesystem::path path;
};

struct OpenOptions {
  std::filesystem::path workdir;  // cache root; clones land in <workdir>/<sanitized-id>/
  bool use_cache = true;          // false forces a fresh clone
  Deadline deadline;
};

/// Opens a local repository in place, or clones a remote one into the cache.
/// Shallow histories are refused: the analysis needs the full history.
RepoHandle open_repository(const std::string& source, const OpenOptions& opts);

/// True if the source looks like a remote (URL scheme or scp-like git address).
bool is_remote_source(const std::string& source);

/// Enumerates tags (optionally narrowed by a regex over the tag name) into
/// release windows ordered by tag timestamp, name as tie-break. Window 0 holds
/// everything up to the first tag; commit attribution is by reachability
/// difference, so every commit lands in exactly one window.
ReleaseSet enumerate_releases(const RepoHandle& handle,
                              const std::optional<std::string>& tag_filter = {},
                              Deadline deadline = {});

/// Git-derived summary fields. "now" is injected so replay runs stay deterministic.
MiningSummary mining_summary(const ReleaseSet& releases, UnixSeconds now);

}  // namespace ossrecon
