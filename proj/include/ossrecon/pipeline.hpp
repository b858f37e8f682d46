#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ossrecon/collectors.hpp"
#include "ossrecon/report.hpp"

namespace ossrecon {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Html };

// Exit codes of the assess/batch commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnusableRepo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTimeout = 3;

struct RunConfig {
  std::string source;
  std::filesystem::path output_dir = "out";
  FetchMode mode = FetchMode::Live;
  std::optional<std::string> tag_filter;
  std::optional<std::filesystem::path> keyword_table;
  std::optional<std::string> support_tag;
  std::set<OutputFormat> formats = {OutputFormat::Json, OutputFormat::Html};
  int timeout_seconds = 900;

  bool no_cache = false;
  std::filesystem::path cache_dir;  // empty -> $OSS_RECON_CACHE or <output_dir>/cache
  std::filesystem::path fixture_dir = "fixtures";
  std::string github_base = "https://api.github.com";
  std::string stackexchange_base = "https://api.stackexchange.com";
  std::string osv_base = "https://api.osv.dev";
  std::string auth_token;                       // $OSS_RECON_TOKEN
  std::vector<std::filesystem::path> manifests; // empty -> autodetect in repo root
  std::optional<UnixSeconds> now_override;      // pins clocks for reproducible output
  int parallel = 1;                             // batch mode only
  std::chrono::milliseconds backoff_base{1000};

  void validate() const;  // throws ConfigError
};

struct AssessmentOutcome {
  AssessmentReport report;
  std::vector<std::filesystem::path> written_files;
};

/// Full pipeline for one repository: mine, classify, score, collect, assemble,
/// write the selected formats. Collector failures degrade to warnings; mining
/// and classification failures propagate.
AssessmentOutcome run_assessment(const RunConfig& config);

/// CLI semantics on top of run_assessment: maps errors to exit codes and
/// removes partial outputs when the run times out.
int assess(const RunConfig& config);

struct BatchRow {
  std::string source;
  bool ok = false;
  std::string error;
  double maturity_ratio = 0.0;
  int release_count = 0;
  std::filesystem::path report_dir;
};

struct BatchSummary {
  std::vector<BatchRow> rows;
  int succeeded = 0;
  int failed = 0;
};

/// Assesses every repository listed in list_file (one source per line, `#`
/// comments and blanks skipped), bounded-parallel, never aborting on a failed
/// repo. Writes <output_dir>/summary.json plus one report directory per repo.
int run_batch(const std::filesystem::path& list_file, const RunConfig& config_template,
              BatchSummary* out_summary = nullptr);

/// Derives (owner, repo) from a hosted-repository URL such as
/// https://host/owner/repo(.git) or git@host:owner/repo(.git).
std::optional<std::pair<std::string, std::string>> parse_owner_repo(const std::string& url);

/// Last path component of a source, without .git — the default Q&A tag basis.
std::string repo_display_name(const std::string& source);

}  // namespace ossrecon
