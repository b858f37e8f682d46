#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ossrecon/collectors.hpp"
#include "ossrecon/maturity.hpp"
#include "ossrecon/miner.hpp"

namespace ossrecon {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Commit activity of one release: diff volume and commit count.
struct ReleaseActivity {
  int ordinal = 0;
  std::string tag;
  UnixSeconds tag_timestamp = 0;
  std::int64_t commits = 0;
  std::int64_t additions = 0;
  std::int64_t deletions = 0;

  bool operator==(const ReleaseActivity&) const = default;
};

/// The full assessment: every attribute group is always present in the
/// serialized form; collector groups that could not be fetched carry explicit
/// null markers rather than being omitted.
struct AssessmentReport {
  std::string schema_version = "1";
  UnixSeconds generated_at = 0;
  std::string source;

  std::optional<RepoMetadata> metadata;
  std::optional<CommunityInterest> community;
  std::optional<LicenseInfo> license;
  std::optional<SupportStats> support;
  bool support_tag_defaulted = false;
  std::optional<std::vector<VulnerabilityFinding>> vulnerabilities;

  MiningSummary mining;
  std::vector<ReleaseActivity> activity;                 // per tagged release
  std::optional<ReleaseActivity> unreleased_activity;    // commits past the last tag
  std::vector<ActivityProfile> profiles;
  std::vector<CrossoverEvent> crossovers;
  MaturityScore maturity;

  std::vector<std::string> warnings;

  bool operator==(const AssessmentReport&) const = default;
};

struct AssembleInput {
  std::string source;
  UnixSeconds generated_at = 0;

  std::optional<RepoMetadata> metadata;
  std::optional<CommunityInterest> community;
  std::optional<LicenseInfo> license;
  std::optional<SupportStats> support;
  bool support_tag_defaulted = false;
  std::optional<std::vector<VulnerabilityFinding>> vulnerabilities;

  MiningSummary mining;
  const ReleaseSet* releases = nullptr;  // required
  std::vector<ActivityProfile> profiles;
  std::vector<CrossoverEvent> crossovers;
  MaturityScore maturity;

  std::vector<std::string> warnings;
};

/// Cross-checks the parts (profile count vs release count, maturity totals)
/// and throws AssemblyError naming the mismatched fields.
AssessmentReport assemble(const AssembleInput& input);

/// Deterministic serialization: fixed key order, ISO-8601 UTC timestamps,
/// ratios and day averages rounded to two decimals. Round-trips losslessly.
std::string to_json(const AssessmentReport& report);

AssessmentReport report_from_json(std::string_view json_text);

/// One self-contained page: inline styles, inline SVG charts, no external
/// resources. Classification chart is a stacked bar chart (corrective red,
/// perfective yellow, adaptive blue, unclassified gray); the maturity chart
/// plots the three series with one dot per crossover.
std::string to_html(const AssessmentReport& report);

}  // namespace ossrecon
