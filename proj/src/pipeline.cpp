#include "ossrecon/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <regex>
#include <thread>

#include "json.hpp"
#include "ossrecon/classifier.hpp"

namespace ossrecon {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

fs::path resolve_cache_dir(const RunConfig& config) {
  if (!config.cache_dir.empty()) return config.cache_dir;
  const std::string env = env_or_empty("OSS_RECON_CACHE");
  if (!env.empty()) return env;
  return config.output_dir / "cache";
}

/// Owner/repo for the metadata collectors: parsed from a remote source URL, or
/// from the local clone's origin remote.
std::optional<std::pair<std::string, std::string>> derive_owner_repo(const std::string& source,
                                                                     const RepoHandle& handle,
                                                                     Deadline deadline) {
  if (is_remote_source(source)) return parse_owner_repo(source);
  CommandResult result =
      run_command({"git", "remote", "get-url", "origin"}, handle.path, deadline);
  if (result.exit_code != 0) return std::nullopt;
  return parse_owner_repo(trim(result.out));
}

std::vector<fs::path> detect_manifests(const RunConfig& config, const RepoHandle& handle) {
  if (!config.manifests.empty()) return config.manifests;
  std::vector<fs::path> found;
  for (const char* name : {"Cargo.toml", "package.json", "requirements.txt"}) {
    fs::path candidate = handle.path / name;
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec)) found.push_back(candidate);
  }
  return found;
}

void write_atomically(const fs::path& file, const std::string& content) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, file);
}

struct CollectorRun {
  std::optional<RepoMetadata> metadata;
  std::optional<CommunityInterest> community;
  std::optional<LicenseInfo> license;
  std::optional<SupportStats> support;
  std::optional<std::vector<VulnerabilityFinding>> vulnerabilities;
  std::vector<std::string> warnings;
};

/// Runs the three collector groups concurrently, then folds results and
/// warnings back in a fixed order so the report stays deterministic.
CollectorRun run_collectors(const RunConfig& config, const std::string& support_tag,
                            const std::optional<std::pair<std::string, std::string>>& owner_repo,
                            const std::vector<fs::path>& manifests) {
  CollectorConfig collector_config;
  collector_config.mode = config.mode;
  collector_config.github_base = config.github_base;
  collector_config.stackexchange_base = config.stackexchange_base;
  collector_config.osv_base = config.osv_base;
  collector_config.fixture_dir = config.fixture_dir;
  collector_config.auth_token =
      config.auth_token.empty() ? env_or_empty("OSS_RECON_TOKEN") : config.auth_token;
  collector_config.backoff_base = config.backoff_base;

  CollectorRun run;

  auto metadata_task = std::async(std::launch::async, [&]() -> MetadataBundle {
    if (!owner_repo)
      throw CollectorError(CollectorError::Kind::Unavailable,
                           "could not derive owner/repo from source");
    HttpGateway gateway(collector_config);
    return fetch_repo_metadata(owner_repo->first, owner_repo->second, gateway);
  });
  auto support_task = std::async(std::launch::async, [&]() -> SupportStats {
    HttpGateway gateway(collector_config);
    return fetch_support_stats(support_tag, gateway);
  });
  auto vuln_task = std::async(std::launch::async,
                              [&]() -> std::pair<std::vector<VulnerabilityFinding>,
                                                 std::vector<std::string>> {
                                std::vector<std::string> warnings;
                                HttpGateway gateway(collector_config);
                                auto findings = scan_vulnerabilities(manifests, gateway, warnings);
                                return {std::move(findings), std::move(warnings)};
                              });

  try {
    MetadataBundle bundle = metadata_task.get();
    run.metadata = std::move(bundle.metadata);
    run.community = bundle.community;
    run.license = std::move(bundle.license);
    for (auto& w : bundle.warnings) run.warnings.push_back(std::move(w));
  } catch (const std::exception& e) {
    run.warnings.push_back(std::string("repository metadata unavailable: ") + e.what());
  }

  try {
    run.support = support_task.get();
  } catch (const std::exception& e) {
    run.warnings.push_back(std::string("support stats unavailable: ") + e.what());
  }

  try {
    auto [findings, warnings] = vuln_task.get();
    run.vulnerabilities = std::move(findings);
    for (auto& w : warnings) run.warnings.push_back(std::move(w));
  } catch (const std::exception& e) {
    run.warnings.push_back(std::string("vulnerability scan unavailable: ") + e.what());
  }

  return run;
}

}  // namespace

void RunConfig::validate() const {
  if (source.empty()) throw ConfigError("source must not be empty");
  if (formats.empty()) throw ConfigError("at least one output format is required");
  if (timeout_seconds <= 0) throw ConfigError("timeout must be positive");
  if (parallel < 1) throw ConfigError("parallel must be >= 1");
  if (tag_filter) {
    try {
      std::regex probe(*tag_filter);
    } catch (const std::regex_error& e) {
      throw ConfigError("invalid tag filter '" + *tag_filter + "': " + e.what());
    }
  }
}

AssessmentOutcome run_assessment(const RunConfig& config) {
  config.validate();

  const auto deadline_point =
      std::chrono::steady_clock::now() + std::chrono::seconds(config.timeout_seconds);
  Deadline deadline = deadline_point;

  KeywordTable table;
  if (config.keyword_table) {
    try {
      table = load_keyword_table(*config.keyword_table);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("keyword table: ") + e.what());
    }
  } else {
    table = default_keyword_table();
  }

  OpenOptions open_opts;
  open_opts.workdir = resolve_cache_dir(config);
  open_opts.use_cache = !config.no_cache;
  open_opts.deadline = deadline;
  RepoHandle handle = open_repository(config.source, open_opts);

  ReleaseSet releases = enumerate_releases(handle, config.tag_filter, deadline);
  check_deadline(deadline, "release enumeration");

  std::vector<ActivityProfile> profiles = profile_releases(releases.windows, table);
  std::vector<CrossoverEvent> crossovers = all_crossovers(profiles);
  MaturityScore maturity = maturity_score(profiles);
  check_deadline(deadline, "classification");

  // Pin the clock in replay mode so byte-identical reruns are possible: the
  // repository's own last commit is the only stable reference point.
  UnixSeconds last_commit = 0;
  for (const auto& w : releases.windows)
    for (const Commit& c : w.commits) last_commit = std::max(last_commit, c.author_timestamp);
  if (releases.unreleased)
    for (const Commit& c : releases.unreleased->commits)
      last_commit = std::max(last_commit, c.author_timestamp);

  UnixSeconds now;
  if (config.now_override) {
    now = *config.now_override;
  } else if (config.mode == FetchMode::Replay) {
    now = last_commit;
  } else {
    now = std::chrono::duration_cast<std::chrono::seconds>(
              std::chrono::system_clock::now().time_since_epoch())
              .count();
  }

  MiningSummary mining = mining_summary(releases, now);

  std::vector<std::string> warnings;
  if (releases.no_tags)
    warnings.push_back("no release tags found; all commits are reported as unreleased");

  auto owner_repo = derive_owner_repo(config.source, handle, deadline);
  std::string support_tag = config.support_tag.value_or(to_lower_ascii(repo_display_name(config.source)));

  std::vector<fs::path> manifests = detect_manifests(config, handle);
  if (manifests.empty())
    warnings.push_back("no dependency manifests found; vulnerability scan covers nothing");

  CollectorRun collected = run_collectors(config, support_tag, owner_repo, manifests);
  check_deadline(deadline, "collectors");
  for (auto& w : collected.warnings) warnings.push_back(std::move(w));

  AssembleInput input;
  input.source = config.source;
  input.generated_at = now;
  input.metadata = std::move(collected.metadata);
  input.community = collected.community;
  input.license = std::move(collected.license);
  input.support = std::move(collected.support);
  input.support_tag_defaulted = !config.support_tag.has_value();
  input.vulnerabilities = std::move(collected.vulnerabilities);
  input.mining = mining;
  input.releases = &releases;
  input.profiles = std::move(profiles);
  input.crossovers = std::move(crossovers);
  input.maturity = maturity;
  input.warnings = std::move(warnings);

  AssessmentOutcome outcome;
  outcome.report = assemble(input);

  fs::create_directories(config.output_dir);
  if (config.formats.count(OutputFormat::Json)) {
    fs::path file = config.output_dir / "report.json";
    write_atomically(file, to_json(outcome.report));
    outcome.written_files.push_back(file);
  }
  if (config.formats.count(OutputFormat::Html)) {
    fs::path file = config.output_dir / "report.html";
    write_atomically(file, to_html(outcome.report));
    outcome.written_files.push_back(file);
  }
  check_deadline(deadline, "report output");
  return outcome;
}

int assess(const RunConfig& config) {
  try {
    AssessmentOutcome outcome = run_assessment(config);
    char ratio[32];
    std::snprintf(ratio, sizeof(ratio), "%.2f", outcome.report.maturity.maturity_ratio);
    std::cout << "assessed " << config.source << ": maturity " << ratio << " ("
              << outcome.report.maturity.total_crossovers << " crossovers / "
              << outcome.report.maturity.release_count << " releases)\n";
    for (const auto& file : outcome.written_files) std::cout << "wrote " << file.string() << "\n";
    if (!outcome.report.warnings.empty())
      std::cout << outcome.report.warnings.size() << " warning(s); see the report\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TimeoutError& e) {
    // Partial outputs would look complete; remove anything this run staged.
    std::error_code ec;
    for (const char* name : {"report.json", "report.html"}) {
      fs::remove(config.output_dir / name, ec);
      fs::remove(config.output_dir / (std::string(name) + ".tmp"), ec);
    }
    std::cerr << "timed out: " << e.what() << "\n";
    return kExitTimeout;
  } catch (const MinerError& e) {
    std::cerr << "repository error: " << e.what() << "\n";
    return kExitUnusableRepo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnusableRepo;
  }
}

int run_batch(const fs::path& list_file, const RunConfig& config_template,
              BatchSummary* out_summary) {
  std::ifstream in(list_file);
  if (!in) {
    std::cerr << "configuration error: cannot read list file " << list_file.string() << "\n";
    return kExitConfig;
  }
  std::vector<std::string> sources;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    sources.push_back(std::move(entry));
  }

  BatchSummary summary;
  summary.rows.resize(sources.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= sources.size()) return;
      BatchRow& row = summary.rows[i];
      row.source = sources[i];
      RunConfig config = config_template;
      config.source = sources[i];
      config.output_dir = config_template.output_dir / sanitize_identifier(sources[i]);
      row.report_dir = config.output_dir;
      try {
        AssessmentOutcome outcome = run_assessment(config);
        row.ok = true;
        row.maturity_ratio = outcome.report.maturity.maturity_ratio;
        row.release_count = outcome.report.maturity.release_count;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };

  const size_t thread_count =
      std::min<size_t>(static_cast<size_t>(std::max(config_template.parallel, 1)),
                       std::max<size_t>(sources.size(), 1));
  std::vector<std::thread> threads;
  for (size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  for (const auto& row : summary.rows) (row.ok ? summary.succeeded : summary.failed)++;

  ordered_json doc;
  doc["repo_count"] = summary.rows.size();
  doc["succeeded"] = summary.succeeded;
  doc["failed"] = summary.failed;
  ordered_json rows = ordered_json::array();
  for (const auto& row : summary.rows) {
    ordered_json r;
    r["source"] = row.source;
    r["ok"] = row.ok;
    if (row.ok) {
      r["maturity_ratio"] = round2(row.maturity_ratio);
      r["release_count"] = row.release_count;
      r["report_dir"] = row.report_dir.string();
    } else {
      r["error"] = row.error;
    }
    rows.push_back(std::move(r));
  }
  doc["repos"] = rows;

  fs::create_directories(config_template.output_dir);
  write_atomically(config_template.output_dir / "summary.json", doc.dump(2) + "\n");

  std::cout << "batch: " << summary.succeeded << " succeeded, " << summary.failed << " failed ("
            << summary.rows.size() << " total)\n";
  if (out_summary) *out_summary = std::move(summary);
  return kExitOk;
}

std::optional<std::pair<std::string, std::string>> parse_owner_repo(const std::string& url) {
  // Handles https://host/owner/repo(.git), ssh://git@host/owner/repo and the
  // scp-like git@host:owner/repo form.
  static const std::regex pattern(
      R"(^(?:[a-zA-Z][a-zA-Z0-9+.-]*://)?(?:[^/@]+@)?[^/:]+[:/]([^/:]+)/([^/]+?)(?:\.git)?/?$)");
  std::smatch match;
  if (!std::regex_match(url, match, pattern)) return std::nullopt;
  std::string owner = match[1].str();
  std::string repo = match[2].str();
  if (owner.empty() || repo.empty()) return std::nullopt;
  return std::make_pair(owner, repo);
}

std::string repo_display_name(const std::string& source) {
  std::string name = source;
  while (!name.empty() && (name.back() == '/' || name.back() == '\\')) name.pop_back();
  auto cut = name.find_last_of("/\\:");
  if (cut != std::string::npos) name = name.substr(cut + 1);
  if (name.size() > 4 && name.ends_with(".git")) name.resize(name.size() - 4);
  return name.empty() ? "repository" : name;
}

}  // namespace ossrecon
