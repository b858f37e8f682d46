#include "ossrecon/miner.hpp"

#include <algorithm>
#include <charconv>
#include <regex>

namespace ossrecon {

namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';

// Record layout: hash, author timestamp, parent hashes, full message — field
// separated — then the numstat block. Messages containing the separator byte
// would break the parse; git histories do not contain 0x1f in practice.
const std::string kLogFormat = "--format=%x1e%H%x1f%at%x1f%P%x1f%B%x1f";

CommandResult git(const std::filesystem::path& repo, std::vector<std::string> args,
                  Deadline deadline) {
  std::vector<std::string> argv = {"git", "-C", repo.string()};
  for (auto& a : args) argv.push_back(std::move(a));
  CommandResult r = run_command(argv, {}, deadline, {{"GIT_TERMINAL_PROMPT", "0"}});
  if (r.timed_out) throw TimeoutError("timeout exceeded while running git in " + repo.string());
  return r;
}

CommandResult git_checked(const std::filesystem::path& repo, std::vector<std::string> args,
                          Deadline deadline, const std::string& what) {
  CommandResult r = git(repo, std::move(args), deadline);
  if (r.exit_code != 0)
    throw MinerError(MinerError::Kind::GitFailed, what + " failed: " + trim(r.err));
  return r;
}

std::int64_t parse_int(std::string_view s, std::int64_t fallback = 0) {
  std::int64_t v = fallback;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::vector<Commit> parse_log(std::string_view text) {
  std::vector<Commit> commits;
  size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != kRecordSep) {
      ++pos;
      continue;
    }
    size_t end = text.find(kRecordSep, pos + 1);
    if (end == std::string_view::npos) end = text.size();
    std::string_view record = text.substr(pos + 1, end - pos - 1);
    pos = end;

    Commit c;
    size_t cursor = 0;
    auto next_field = [&]() -> std::string_view {
      size_t sep = record.find(kFieldSep, cursor);
      if (sep == std::string_view::npos) sep = record.size();
      std::string_view field = record.substr(cursor, sep - cursor);
      cursor = std::min(sep + 1, record.size());
      return field;
    };

    c.hash = std::string(next_field());
    c.author_timestamp = parse_int(next_field());
    std::string_view parents = next_field();
    c.is_merge = parents.find(' ') != std::string_view::npos;
    std::string_view body = next_field();
    while (body.ends_with('\n')) body.remove_suffix(1);
    c.message = std::string(body);

    // Remainder is the numstat block: "<added>\t<deleted>\t<path>" per line,
    // "-" for binary files.
    std::string_view stats = record.substr(cursor);
    size_t line_start = 0;
    while (line_start < stats.size()) {
      size_t line_end = stats.find('\n', line_start);
      if (line_end == std::string_view::npos) line_end = stats.size();
      std::string_view line = stats.substr(line_start, line_end - line_start);
      line_start = line_end + 1;
      size_t t1 = line.find('\t');
      if (t1 == std::string_view::npos) continue;
      size_t t2 = line.find('\t', t1 + 1);
      if (t2 == std::string_view::npos) continue;
      std::string_view added = line.substr(0, t1);
      std::string_view deleted = line.substr(t1 + 1, t2 - t1 - 1);
      if (added != "-") c.additions += parse_int(added);
      if (deleted != "-") c.deletions += parse_int(deleted);
    }

    if (!c.hash.empty()) commits.push_back(std::move(c));
  }
  return commits;
}

std::vector<Commit> log_range(const RepoHandle& handle, const std::string& rev,
                              const std::vector<std::string>& exclude, Deadline deadline) {
  std::vector<std::string> args = {"log", "--reverse", "--numstat",
                                   "--diff-merges=first-parent", kLogFormat, rev};
  if (!exclude.empty()) {
    args.emplace_back("--not");
    for (const auto& e : exclude) args.push_back(e);
  }
  args.emplace_back("--");
  CommandResult r = git_checked(handle.path, std::move(args), deadline, "git log");
  return parse_log(r.out);
}

bool source_is_local_repo(const std::string& source) {
  return !is_remote_source(source) && std::filesystem::exists(source);
}

void require_full_history(const std::filesystem::path& repo, Deadline deadline) {
  CommandResult r =
      git_checked(repo, {"rev-parse", "--is-shallow-repository"}, deadline, "git rev-parse");
  if (trim(r.out) == "true")
    throw MinerError(MinerError::Kind::ShallowRepository,
                     "shallow repository refused: mining needs the full history (" +
                         repo.string() + ")");
}

}  // namespace

bool is_remote_source(const std::string& source) {
  if (source.find("://") != std::string::npos) return true;
  // scp-like: user@host:path
  size_t at = source.find('@');
  size_t colon = source.find(':');
  return at != std::string::npos && colon != std::string::npos && at < colon;
}

RepoHandle open_repository(const std::string& source, const OpenOptions& opts) {
  namespace fs = std::filesystem;

  if (source_is_local_repo(source)) {
    fs::path path(source);
    CommandResult r = git(path, {"rev-parse", "--git-dir"}, opts.deadline);
    if (r.exit_code != 0)
      throw MinerError(MinerError::Kind::NotARepository,
                       "not a git repository: " + source + " (" + trim(r.err) + ")");
    require_full_history(path, opts.deadline);
    return RepoHandle{path};
  }

  if (!is_remote_source(source))
    throw MinerError(MinerError::Kind::NotARepository,
                     "not a git repository: " + source + " (path does not exist)");

  fs::path dest = opts.workdir / sanitize_identifier(source);
  if (fs::exists(dest)) {
    bool valid = git(dest, {"rev-parse", "--git-dir"}, opts.deadline).exit_code == 0;
    if (opts.use_cache && valid) {
      require_full_history(dest, opts.deadline);
      return RepoHandle{dest};
    }
    fs::remove_all(dest);
  }
  fs::create_directories(opts.workdir);

  CommandResult r = run_command({"git", "clone", "--quiet", source, dest.string()}, {},
                                opts.deadline, {{"GIT_TERMINAL_PROMPT", "0"}});
  if (r.timed_out) throw TimeoutError("timeout exceeded while cloning " + source);
  if (r.exit_code != 0) {
    std::error_code ec;
    fs::remove_all(dest, ec);
    std::string err = trim(r.err);
    std::string lowered = to_lower_ascii(err);
    if (lowered.find("could not resolve") != std::string::npos ||
        lowered.find("unable to access") != std::string::npos ||
        lowered.find("connection refused") != std::string::npos ||
        lowered.find("network is unreachable") != std::string::npos)
      throw MinerError(MinerError::Kind::UnreachableRemote,
                       "unreachable remote: " + source + " (" + err + ")");
    throw MinerError(MinerError::Kind::CloneFailed, "clone failed: " + source + " (" + err + ")");
  }
  require_full_history(dest, opts.deadline);
  return RepoHandle{dest};
}

ReleaseSet enumerate_releases(const RepoHandle& handle,
                              const std::optional<std::string>& tag_filter, Deadline deadline) {
  if (git(handle.path, {"rev-parse", "--verify", "HEAD"}, deadline).exit_code != 0)
    throw MinerError(MinerError::Kind::GitFailed,
                     "repository has no commits: " + handle.path.string());

  CommandResult r = git_checked(
      handle.path,
      {"for-each-ref", "refs/tags", "--format=%(refname:strip=2)%09%(creatordate:unix)"},
      deadline, "git for-each-ref");

  struct TagRef {
    std::string name;
    UnixSeconds timestamp;
  };
  std::vector<TagRef> tags;
  std::optional<std::regex> filter;
  if (tag_filter) filter.emplace(*tag_filter, std::regex::ECMAScript);

  for (const auto& line : split(r.out, '\n')) {
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos) continue;
    TagRef tag{line.substr(0, tab), parse_int(std::string_view(line).substr(tab + 1))};
    if (filter && !std::regex_search(tag.name, *filter)) continue;
    tags.push_back(std::move(tag));
  }

  // Release order: tag timestamp, then name (stable tie-break for tags that
  // share a commit or a timestamp).
  std::sort(tags.begin(), tags.end(), [](const TagRef& a, const TagRef& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.name < b.name;
  });

  ReleaseSet set;
  set.no_tags = tags.empty();

  std::vector<std::string> seen;
  for (size_t i = 0; i < tags.size(); ++i) {
    check_deadline(deadline, "release enumeration");
    ReleaseWindow window;
    window.ordinal = static_cast<int>(i);
    window.tag_name = tags[i].name;
    window.tag_timestamp = tags[i].timestamp;
    window.commits = log_range(handle, tags[i].name, seen, deadline);
    seen.push_back(tags[i].name);
    set.windows.push_back(std::move(window));
  }

  std::vector<Commit> tail = log_range(handle, "HEAD", seen, deadline);
  if (!tail.empty()) {
    ReleaseWindow window;
    window.ordinal = static_cast<int>(set.windows.size());
    window.unreleased = true;
    window.tag_timestamp = std::max_element(tail.begin(), tail.end(),
                                            [](const Commit& a, const Commit& b) {
                                              return a.author_timestamp < b.author_timestamp;
                                            })
                               ->author_timestamp;
    window.commits = std::move(tail);
    set.unreleased = std::move(window);
  }
  return set;
}

MiningSummary mining_summary(const ReleaseSet& releases, UnixSeconds now) {
  MiningSummary summary;
  summary.release_count = static_cast<int>(releases.windows.size());

  std::optional<UnixSeconds> first, last;
  auto scan = [&](const ReleaseWindow& w) {
    summary.total_commits += static_cast<std::int64_t>(w.commits.size());
    for (const Commit& c : w.commits) {
      if (!first || c.author_timestamp < *first) first = c.author_timestamp;
      if (!last || c.author_timestamp > *last) last = c.author_timestamp;
    }
  };
  for (const auto& w : releases.windows) scan(w);
  if (releases.unreleased) scan(*releases.unreleased);

  if (last) summary.last_updated = *last;
  if (first && now > *first)
    summary.repo_age_days = static_cast<double>(now - *first) / kSecondsPerDay;

  if (summary.release_count >= 2) {
    UnixSeconds span =
        releases.windows.back().tag_timestamp - releases.windows.front().tag_timestamp;
    summary.avg_days_between_releases =
        static_cast<double>(span) / kSecondsPerDay / (summary.release_count - 1);
  }
  return summary;
}

}  // namespace ossrecon
