#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ossrecon/pipeline.hpp"

namespace {

/// Shared flag surface of `assess` and `batch`.
void add_common_options(CLI::App* cmd, ossrecon::RunConfig& config, std::string& mode,
                        std::string& formats, std::string& tag_filter, std::string& keyword_table,
                        std::string& support_tag, std::string& now, std::string& cache_dir,
                        std::vector<std::string>& manifests) {
  cmd->add_option("--mode", mode, "Collector mode: live, record, or replay")
      ->check(CLI::IsMember({"live", "record", "replay"}))
      ->capture_default_str();
  cmd->add_option("--out", config.output_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", formats, "Comma-separated output formats: json,html")
      ->capture_default_str();
  cmd->add_option("--tag-filter", tag_filter, "Regular expression narrowing the release tags");
  cmd->add_option("--keyword-table", keyword_table,
                  "Classifier keyword table file (defaults to the built-in table)");
  cmd->add_option("--support-tag", support_tag,
                  "Q&A tag to query (defaults to the repository name)");
  cmd->add_option("--timeout", config.timeout_seconds, "Per-repository time budget in seconds")
      ->capture_default_str();
  cmd->add_flag("--no-cache", config.no_cache, "Force a fresh clone instead of reusing the cache");
  cmd->add_option("--cache-dir", cache_dir, "Clone cache root (or $OSS_RECON_CACHE)");
  cmd->add_option("--fixtures", config.fixture_dir, "Fixture directory for record/replay modes")
      ->capture_default_str();
  cmd->add_option("--github-api", config.github_base, "Repository-metadata API base URL")
      ->capture_default_str();
  cmd->add_option("--stackexchange-api", config.stackexchange_base, "Q&A API base URL")
      ->capture_default_str();
  cmd->add_option("--osv-api", config.osv_base, "Vulnerability API base URL")
      ->capture_default_str();
  cmd->add_option("--now", now, "Pin the clock to an ISO-8601 UTC instant (reproducible runs)");
  cmd->add_option("--manifest", manifests,
                  "Dependency manifest path(s); defaults to autodetection in the repo root");
}

/// Applies the string-typed flags onto the config; throws ConfigError on bad values.
void finish_config(ossrecon::RunConfig& config, const std::string& mode,
                   const std::string& formats, const std::string& tag_filter,
                   const std::string& keyword_table, const std::string& support_tag,
                   const std::string& now, const std::string& cache_dir,
                   const std::vector<std::string>& manifests) {
  auto parsed_mode = ossrecon::fetch_mode_from_string(mode);
  if (!parsed_mode) throw ossrecon::ConfigError("unknown mode '" + mode + "'");
  config.mode = *parsed_mode;

  config.formats.clear();
  for (const auto& part : ossrecon::split(formats, ',')) {
    const std::string f = ossrecon::trim(part);
    if (f.empty()) continue;
    if (f == "json")
      config.formats.insert(ossrecon::OutputFormat::Json);
    else if (f == "html")
      config.formats.insert(ossrecon::OutputFormat::Html);
    else
      throw ossrecon::ConfigError("unknown format '" + f + "' (expected json or html)");
  }

  if (!tag_filter.empty()) config.tag_filter = tag_filter;
  if (!keyword_table.empty()) config.keyword_table = keyword_table;
  if (!support_tag.empty()) config.support_tag = support_tag;
  if (!cache_dir.empty()) config.cache_dir = cache_dir;
  if (!now.empty()) {
    auto instant = ossrecon::parse_iso_utc(now);
    if (!instant) throw ossrecon::ConfigError("--now expects ISO-8601 UTC, got '" + now + "'");
    config.now_override = *instant;
  }
  for (const auto& m : manifests) config.manifests.emplace_back(m);
  config.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oss-recon: repository assessment from git history and hosting metadata"};
  app.require_subcommand(1);

  ossrecon::RunConfig config;
  std::string mode = "live";
  std::string formats = "json,html";
  std::string tag_filter, keyword_table, support_tag, now, cache_dir;
  std::vector<std::string> manifests;

  CLI::App* assess_cmd =
      app.add_subcommand("assess", "Assess one repository (local path or clone URL)");
  std::string source;
  assess_cmd->add_option("source", source, "Repository path or URL")->required();
  add_common_options(assess_cmd, config, mode, formats, tag_filter, keyword_table, support_tag,
                     now, cache_dir, manifests);

  CLI::App* batch_cmd =
      app.add_subcommand("batch", "Assess every repository listed in a file (one per line)");
  std::string list_file;
  batch_cmd->add_option("list", list_file, "File listing repository sources")->required();
  batch_cmd->add_option("--parallel", config.parallel, "Bounded batch parallelism")
      ->capture_default_str();
  add_common_options(batch_cmd, config, mode, formats, tag_filter, keyword_table, support_tag,
                     now, cache_dir, manifests);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0 via CLI11; real parse errors map to the
    // configuration-error exit code.
    const int code = app.exit(e);
    return code == 0 ? 0 : ossrecon::kExitConfig;
  }

  try {
    if (app.got_subcommand(assess_cmd)) {
      config.source = source;
      finish_config(config, mode, formats, tag_filter, keyword_table, support_tag, now, cache_dir,
                    manifests);
      return ossrecon::assess(config);
    }
    config.source = "batch";  // placeholder; per-repo sources come from the list
    finish_config(config, mode, formats, tag_filter, keyword_table, support_tag, now, cache_dir,
                  manifests);
    config.source.clear();
    return ossrecon::run_batch(list_file, config);
  } catch (const ossrecon::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return ossrecon::kExitConfig;
  }
}
