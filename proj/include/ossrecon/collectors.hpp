#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ossrecon/util.hpp"

namespace ossrecon {

struct RepoMetadata {
  std::string name;
  std::optional<std::string> description;
  std::optional<std::vector<std::string>> topics;
  std::string api_url;
  // Ordered by byte count (desc), then name, so serialization is stable.
  std::vector<std::pair<std::string, std::int64_t>> languages;
  std::optional<int> community_health_pct;  // 0..100
  std::int64_t open_issues = 0;

  bool operator==(const RepoMetadata&) const = default;
};

struct CommunityInterest {
  std::int64_t stars = 0;
  std::int64_t forks = 0;
  std::int64_t watchers = 0;

  bool operator==(const CommunityInterest&) const = default;
};

struct SupportStats {
  std::string tag;
  std::int64_t question_count = 0;
  std::int64_t answered_count = 0;  // accepted or at least one answer

  bool operator==(const SupportStats&) const = default;
};

enum class Severity { Low, Medium, High, Critical, Unknown };

std::string to_string(Severity s);
Severity severity_from_string(std::string_view s);

struct VulnerabilityFinding {
  std::string advisory_id;
  std::string affected_package;
  Severity severity = Severity::Unknown;
  std::string summary;

  bool operator==(const VulnerabilityFinding&) const = default;
};

struct LicenseInfo {
  std::string spdx_id = "NOASSERTION";
  std::vector<std::string> permissions;
  std::vector<std::string> conditions;
  std::vector<std::string> limitations;

  bool operator==(const LicenseInfo&) const = default;
};

enum class FetchMode { Live, Record, Replay };

std::optional<FetchMode> fetch_mode_from_string(std::string_view s);

class CollectorError : public std::runtime_error {
 public:
  enum class Kind { NotFound, RateLimited, Unavailable, FixtureMissing, BadResponse };

  CollectorError(Kind kind, const std::string& what,
                 std::optional<UnixSeconds> rate_limit_reset = {})
      : std::runtime_error(what), kind_(kind), rate_limit_reset_(rate_limit_reset) {}

  Kind kind() const { return kind_; }
  std::optional<UnixSeconds> rate_limit_reset() const { return rate_limit_reset_; }

 private:
  Kind kind_;
  std::optional<UnixSeconds> rate_limit_reset_;
};

struct HttpRequestKey {
  std::string method;  // "GET" or "POST"
  std::string base_url;
  std::string path;
  std::vector<std::pair<std::string, std::string>> query;
  std::string body;  // POST only

  /// Canonical form hashed for fixture lookup: method, host, path, sorted
  /// query pairs, body — joined with newlines. Auth headers are excluded.
  std::string canonical() const;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// One JSON file per (endpoint, request-hash): `<slug>-<fnv1a64 hex>.json`
/// holding the verbatim response body plus status code.
class FixtureStore {
 public:
  explicit FixtureStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<HttpResponse> load(const HttpRequestKey& key) const;
  void save(const HttpRequestKey& key, const HttpResponse& response) const;

  std::filesystem::path file_for(const HttpRequestKey& key) const;
  static std::string request_hash(const HttpRequestKey& key);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct CollectorConfig {
  FetchMode mode = FetchMode::Live;
  std::string github_base = "https://api.github.com";
  std::string stackexchange_base = "https://api.stackexchange.com";
  std::string osv_base = "https://api.osv.dev";
  std::filesystem::path fixture_dir = "fixtures";
  std::string auth_token;  // from OSS_RECON_TOKEN; empty -> unauthenticated
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::seconds http_timeout{30};
};

/// Routes requests per mode. Replay mode never opens a connection: it serves
/// fixtures or fails with FixtureMissing.
class HttpGateway {
 public:
  explicit HttpGateway(const CollectorConfig& config);

  HttpResponse exec(const HttpRequestKey& key);

  const CollectorConfig& config() const { return config_; }
  const FixtureStore& fixtures() const { return fixtures_; }

 private:
  HttpResponse exec_live(const HttpRequestKey& key);

  CollectorConfig config_;
  FixtureStore fixtures_;
};

struct MetadataBundle {
  RepoMetadata metadata;
  CommunityInterest community;
  LicenseInfo license;
  std::vector<std::string> warnings;
};

/// Repo metadata + community interest + license, via the hosting service's
/// REST API (four requests; optional ones degrade to warnings).
MetadataBundle fetch_repo_metadata(const std::string& owner, const std::string& repo,
                                   HttpGateway& gateway);

/// Question totals for one Q&A tag: all questions, and those with >= 1 answer.
SupportStats fetch_support_stats(const std::string& tag, HttpGateway& gateway);

struct Dependency {
  std::string name;
  std::string version;
  std::string ecosystem;  // OSV ecosystem id: crates.io, PyPI, npm

  bool operator==(const Dependency&) const = default;
};

struct ManifestScan {
  std::vector<Dependency> dependencies;
  std::vector<std::string> warnings;
};

/// Direct dependencies from one manifest, dispatched on the file name:
/// Cargo.toml, requirements.txt, package.json.
ManifestScan parse_manifest(const std::filesystem::path& file);

/// Queries each direct dependency against the OSV-style /v1/query endpoint.
/// Findings are deduplicated by (advisory_id, affected_package) and sorted.
/// Unparseable manifests become warnings; the scan continues.
std::vector<VulnerabilityFinding> scan_vulnerabilities(
    const std::vector<std::filesystem::path>& manifest_paths, HttpGateway& gateway,
    std::vector<std::string>& warnings);

}  // namespace ossrecon
