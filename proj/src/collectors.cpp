#include "ossrecon/collectors.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace ossrecon {

using nlohmann::json;

std::string to_string(Severity s) {
  switch (s) {
    case Severity::Low:
      return "low";
    case Severity::Medium:
      return "medium";
    case Severity::High:
      return "high";
    case Severity::Critical:
      return "critical";
    case Severity::Unknown:
      return "unknown";
  }
  return "unknown";
}

Severity severity_from_string(std::string_view s) {
  std::string v = to_lower_ascii(s);
  if (v == "low") return Severity::Low;
  if (v == "medium" || v == "moderate") return Severity::Medium;
  if (v == "high") return Severity::High;
  if (v == "critical") return Severity::Critical;
  return Severity::Unknown;
}

std::optional<FetchMode> fetch_mode_from_string(std::string_view s) {
  std::string v = to_lower_ascii(s);
  if (v == "live") return FetchMode::Live;
  if (v == "record") return FetchMode::Record;
  if (v == "replay") return FetchMode::Replay;
  return std::nullopt;
}

namespace {

std::string url_encode(std::string_view value) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : value) {
    bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  return out;
}

std::string path_with_query(const HttpRequestKey& key) {
  std::string target = key.path;
  char sep = '?';
  for (const auto& [k, v] : key.query) {
    target += sep;
    target += url_encode(k) + "=" + url_encode(v);
    sep = '&';
  }
  return target;
}

bool is_rate_limited(const httplib::Response& res) {
  if (res.status == 429) return true;
  return res.status == 403 && res.get_header_value("x-ratelimit-remaining") == "0";
}

std::optional<UnixSeconds> reset_time(const httplib::Response& res) {
  if (res.has_header("x-ratelimit-reset"))
    return static_cast<UnixSeconds>(std::stoll(res.get_header_value("x-ratelimit-reset")));
  if (res.has_header("retry-after")) {
    auto now = std::chrono::system_clock::now();
    return std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count() +
           std::stoll(res.get_header_value("retry-after"));
  }
  return std::nullopt;
}

/// 2xx passes through; everything else becomes a typed error so callers see
/// the same behavior whether the response came from the wire or a fixture.
void raise_for_status(const HttpResponse& response, const std::string& context) {
  if (response.status >= 200 && response.status < 300) return;
  if (response.status == 404)
    throw CollectorError(CollectorError::Kind::NotFound, context + " not found");
  if (response.status == 429 || response.status == 403)
    throw CollectorError(CollectorError::Kind::RateLimited, context + " rate limited");
  throw CollectorError(CollectorError::Kind::Unavailable,
                       context + " unavailable: HTTP " + std::to_string(response.status));
}

json parse_body(const HttpResponse& response, const std::string& context) {
  json doc = json::parse(response.body, nullptr, false);
  if (doc.is_discarded())
    throw CollectorError(CollectorError::Kind::BadResponse,
                         context + " returned unparseable JSON");
  return doc;
}

json fetch_json(HttpGateway& gateway, const HttpRequestKey& key, const std::string& context) {
  HttpResponse response = gateway.exec(key);
  raise_for_status(response, context);
  return parse_body(response, context);
}

}  // namespace

HttpGateway::HttpGateway(const CollectorConfig& config)
    : config_(config), fixtures_(config.fixture_dir) {}

HttpResponse HttpGateway::exec_live(const HttpRequestKey& key) {
  httplib::Client client(key.base_url);
  client.set_connection_timeout(config_.http_timeout);
  client.set_read_timeout(config_.http_timeout);
  client.set_follow_location(true);

  const bool github = key.base_url == config_.github_base;
  httplib::Headers headers = {
      {"User-Agent", "oss-recon"},
      {"Accept", github ? "application/vnd.github+json" : "application/json"}};
  if (github && !config_.auth_token.empty())
    headers.emplace("Authorization", "Bearer " + config_.auth_token);

  std::optional<UnixSeconds> last_reset;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Result result =
        key.method == "POST"
            ? client.Post(key.path, headers, key.body, "application/json")
            : client.Get(path_with_query(key), headers);

    if (!result) {
      if (attempt == config_.max_attempts)
        throw CollectorError(CollectorError::Kind::Unavailable,
                             "unavailable: " + key.base_url + key.path + " (" +
                                 httplib::to_string(result.error()) + ")");
    } else if (is_rate_limited(*result)) {
      last_reset = reset_time(*result);
      if (attempt == config_.max_attempts) {
        std::string what = "rate limited: " + key.base_url + key.path;
        if (last_reset) what += " (resets at " + iso_utc(*last_reset) + ")";
        throw CollectorError(CollectorError::Kind::RateLimited, what, last_reset);
      }
    } else {
      return HttpResponse{result->status, result->body};
    }
    std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));
  }
  throw CollectorError(CollectorError::Kind::Unavailable, "unavailable: " + key.base_url);
}

HttpResponse HttpGateway::exec(const HttpRequestKey& key) {
  switch (config_.mode) {
    case FetchMode::Replay: {
      // Replay never touches the network: fixtures are the only source.
      if (auto fixture = fixtures_.load(key)) return *fixture;
      throw CollectorError(CollectorError::Kind::FixtureMissing,
                           "fixture not found: " + fixtures_.file_for(key).string());
    }
    case FetchMode::Record: {
      HttpResponse response = exec_live(key);
      fixtures_.save(key, response);
      return response;
    }
    case FetchMode::Live:
    default:
      return exec_live(key);
  }
}

namespace {

HttpRequestKey github_get(const CollectorConfig& config, std::string path) {
  return HttpRequestKey{"GET", config.github_base, std::move(path), {}, ""};
}

}  // namespace

MetadataBundle fetch_repo_metadata(const std::string& owner, const std::string& repo,
                                   HttpGateway& gateway) {
  const CollectorConfig& config = gateway.config();
  const std::string slug = owner + "/" + repo;

  MetadataBundle bundle;
  json repo_doc = fetch_json(gateway, github_get(config, "/repos/" + slug), "repository " + slug);

  RepoMetadata& meta = bundle.metadata;
  meta.name = repo_doc.value("name", repo);
  meta.api_url = repo_doc.value("url", config.github_base + "/repos/" + slug);
  if (repo_doc.contains("description") && repo_doc["description"].is_string())
    meta.description = repo_doc["description"].get<std::string>();
  else
    bundle.warnings.push_back("repository description unavailable");
  if (repo_doc.contains("topics") && repo_doc["topics"].is_array())
    meta.topics = repo_doc["topics"].get<std::vector<std::string>>();
  else
    bundle.warnings.push_back("repository topics unavailable");
  meta.open_issues = repo_doc.value("open_issues_count", std::int64_t{0});

  bundle.community.stars = repo_doc.value("stargazers_count", std::int64_t{0});
  bundle.community.forks = repo_doc.value("forks_count", std::int64_t{0});
  bundle.community.watchers = repo_doc.value("subscribers_count", std::int64_t{0});

  try {
    json langs = fetch_json(gateway, github_get(config, "/repos/" + slug + "/languages"),
                            "languages of " + slug);
    for (const auto& [name, bytes] : langs.items())
      if (bytes.is_number()) meta.languages.emplace_back(name, bytes.get<std::int64_t>());
    std::sort(meta.languages.begin(), meta.languages.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
  } catch (const CollectorError& e) {
    bundle.warnings.push_back(std::string("languages unavailable: ") + e.what());
  }

  try {
    json profile = fetch_json(gateway, github_get(config, "/repos/" + slug + "/community/profile"),
                              "community profile of " + slug);
    if (profile.contains("health_percentage") && profile["health_percentage"].is_number())
      meta.community_health_pct = profile["health_percentage"].get<int>();
    else
      bundle.warnings.push_back("community health percentage unavailable");
  } catch (const CollectorError& e) {
    bundle.warnings.push_back(std::string("community health unavailable: ") + e.what());
  }

  // License: spdx id comes with the repo document; the grant details need the
  // per-license endpoint. A repo without a license file reports NOASSERTION.
  std::string license_key;
  if (repo_doc.contains("license") && repo_doc["license"].is_object()) {
    const json& lic = repo_doc["license"];
    if (lic.contains("spdx_id") && lic["spdx_id"].is_string())
      bundle.license.spdx_id = lic["spdx_id"].get<std::string>();
    license_key = lic.value("key", "");
  } else {
    bundle.warnings.push_back("no license detected; legal attributes reported as NOASSERTION");
  }
  if (bundle.license.spdx_id.empty()) bundle.license.spdx_id = "NOASSERTION";

  if (!license_key.empty() && license_key != "other" &&
      bundle.license.spdx_id != "NOASSERTION") {
    try {
      json lic = fetch_json(gateway, github_get(config, "/licenses/" + license_key),
                            "license " + license_key);
      auto read_list = [&lic](const char* field) {
        std::vector<std::string> out;
        if (lic.contains(field) && lic[field].is_array())
          for (const auto& item : lic[field])
            if (item.is_string()) out.push_back(item.get<std::string>());
        return out;
      };
      bundle.license.permissions = read_list("permissions");
      bundle.license.conditions = read_list("conditions");
      bundle.license.limitations = read_list("limitations");
    } catch (const CollectorError& e) {
      bundle.warnings.push_back(std::string("license details unavailable: ") + e.what());
    }
  }
  return bundle;
}

SupportStats fetch_support_stats(const std::string& tag, HttpGateway& gateway) {
  const CollectorConfig& config = gateway.config();
  SupportStats stats;
  stats.tag = tag;

  HttpRequestKey total_key{"GET",
                           config.stackexchange_base,
                           "/2.3/questions",
                           {{"site", "stackoverflow"}, {"tagged", tag}, {"filter", "total"}},
                           ""};
  json total = fetch_json(gateway, total_key, "support stats for tag '" + tag + "'");
  stats.question_count = total.value("total", std::int64_t{0});

  HttpRequestKey answered_key{"GET",
                              config.stackexchange_base,
                              "/2.3/search/advanced",
                              {{"site", "stackoverflow"},
                               {"tagged", tag},
                               {"answers", "1"},
                               {"filter", "total"}},
                              ""};
  json answered = fetch_json(gateway, answered_key, "answered stats for tag '" + tag + "'");
  stats.answered_count = std::min(answered.value("total", std::int64_t{0}), stats.question_count);
  return stats;
}

std::vector<VulnerabilityFinding> scan_vulnerabilities(
    const std::vector<std::filesystem::path>& manifest_paths, HttpGateway& gateway,
    std::vector<std::string>& warnings) {
  std::vector<Dependency> deps;
  for (const auto& path : manifest_paths) {
    try {
      ManifestScan scan = parse_manifest(path);
      warnings.insert(warnings.end(), scan.warnings.begin(), scan.warnings.end());
      deps.insert(deps.end(), scan.dependencies.begin(), scan.dependencies.end());
    } catch (const std::exception& e) {
      warnings.push_back(std::string("manifest skipped: ") + e.what());
    }
  }

  std::vector<VulnerabilityFinding> findings;
  std::set<std::pair<std::string, std::string>> dedup;
  for (const auto& dep : deps) {
    json query = {{"version", dep.version},
                  {"package", {{"name", dep.name}, {"ecosystem", dep.ecosystem}}}};
    HttpRequestKey key{"POST", gateway.config().osv_base, "/v1/query", {}, query.dump()};
    json doc = fetch_json(gateway, key, "advisory service");
    if (!doc.contains("vulns") || !doc["vulns"].is_array()) continue;
    for (const auto& vuln : doc["vulns"]) {
      VulnerabilityFinding finding;
      finding.advisory_id = vuln.value("id", "");
      if (finding.advisory_id.empty()) continue;
      finding.affected_package = dep.name;
      finding.summary = vuln.value("summary", "");
      if (vuln.contains("database_specific") && vuln["database_specific"].is_object())
        finding.severity =
            severity_from_string(vuln["database_specific"].value("severity", "unknown"));
      if (dedup.emplace(finding.advisory_id, finding.affected_package).second)
        findings.push_back(std::move(finding));
    }
  }

  std::sort(findings.begin(), findings.end(),
            [](const VulnerabilityFinding& a, const VulnerabilityFinding& b) {
              return std::tie(a.advisory_id, a.affected_package) <
                     std::tie(b.advisory_id, b.affected_package);
            });
  return findings;
}

}  // namespace ossrecon
