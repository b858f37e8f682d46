#include <algorithm>

#include "json.hpp"
#include "ossrecon/report.hpp"

namespace ossrecon {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json json_or_null(const std::optional<std::string>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json activity_row(const ReleaseActivity& a, bool unreleased) {
  ordered_json row;
  row["ordinal"] = a.ordinal;
  row["tag"] = unreleased ? ordered_json(nullptr) : ordered_json(a.tag);
  row["date"] = iso_utc(a.tag_timestamp);
  row["commits"] = a.commits;
  row["additions"] = a.additions;
  row["deletions"] = a.deletions;
  return row;
}

ReleaseActivity activity_from_row(const ordered_json& row) {
  ReleaseActivity a;
  a.ordinal = row.value("ordinal", 0);
  if (row.contains("tag") && row["tag"].is_string()) a.tag = row["tag"].get<std::string>();
  if (row.contains("date") && row["date"].is_string())
    a.tag_timestamp = parse_iso_utc(row["date"].get<std::string>()).value_or(0);
  a.commits = row.value("commits", std::int64_t{0});
  a.additions = row.value("additions", std::int64_t{0});
  a.deletions = row.value("deletions", std::int64_t{0});
  return a;
}

ActivityPair pair_from_string(std::string_view s) {
  if (s == "adaptive_perfective") return ActivityPair::AdaptivePerfective;
  if (s == "corrective_perfective") return ActivityPair::CorrectivePerfective;
  return ActivityPair::AdaptiveCorrective;
}

ActivityLabel label_from_string(std::string_view s) {
  if (s == "corrective") return ActivityLabel::Corrective;
  if (s == "adaptive") return ActivityLabel::Adaptive;
  if (s == "perfective") return ActivityLabel::Perfective;
  return ActivityLabel::Unclassified;
}

}  // namespace

AssessmentReport assemble(const AssembleInput& input) {
  if (!input.releases) throw AssemblyError("assemble: releases missing");

  const auto& windows = input.releases->windows;
  if (input.profiles.size() != windows.size())
    throw AssemblyError("assemble: profiles length (" + std::to_string(input.profiles.size()) +
                        ") does not match release window count (" +
                        std::to_string(windows.size()) + ")");
  if (static_cast<int>(input.profiles.size()) != input.mining.release_count)
    throw AssemblyError("assemble: profiles length (" + std::to_string(input.profiles.size()) +
                        ") does not match mining.release_count (" +
                        std::to_string(input.mining.release_count) + ")");
  if (input.maturity.release_count != input.mining.release_count)
    throw AssemblyError("assemble: maturity.release_count (" +
                        std::to_string(input.maturity.release_count) +
                        ") does not match mining.release_count (" +
                        std::to_string(input.mining.release_count) + ")");
  std::int64_t pair_sum = input.maturity.adaptive_corrective + input.maturity.adaptive_perfective +
                          input.maturity.corrective_perfective;
  if (pair_sum != input.maturity.total_crossovers)
    throw AssemblyError("assemble: maturity.total_crossovers (" +
                        std::to_string(input.maturity.total_crossovers) +
                        ") does not equal the per-pair sum (" + std::to_string(pair_sum) + ")");
  if (static_cast<std::int64_t>(input.crossovers.size()) != input.maturity.total_crossovers)
    throw AssemblyError("assemble: crossovers length (" + std::to_string(input.crossovers.size()) +
                        ") does not match maturity.total_crossovers (" +
                        std::to_string(input.maturity.total_crossovers) + ")");
  for (size_t i = 0; i < input.profiles.size(); ++i) {
    if (input.profiles[i].ordinal != static_cast<int>(i))
      throw AssemblyError("assemble: profiles[" + std::to_string(i) + "].ordinal is " +
                          std::to_string(input.profiles[i].ordinal) + ", expected " +
                          std::to_string(i));
  }

  AssessmentReport report;
  report.generated_at = input.generated_at;
  report.source = input.source;
  report.metadata = input.metadata;
  report.community = input.community;
  report.license = input.license;
  report.support = input.support;
  report.support_tag_defaulted = input.support_tag_defaulted;
  report.vulnerabilities = input.vulnerabilities;

  report.mining = input.mining;
  report.mining.repo_age_days = round2(report.mining.repo_age_days);
  report.mining.avg_days_between_releases = round2(report.mining.avg_days_between_releases);

  auto to_activity = [](const ReleaseWindow& w) {
    ReleaseActivity a;
    a.ordinal = w.ordinal;
    a.tag = w.tag_name;
    a.tag_timestamp = w.tag_timestamp;
    a.commits = static_cast<std::int64_t>(w.commits.size());
    for (const Commit& c : w.commits) {
      a.additions += c.additions;
      a.deletions += c.deletions;
    }
    return a;
  };
  for (const auto& w : windows) report.activity.push_back(to_activity(w));
  if (input.releases->unreleased)
    report.unreleased_activity = to_activity(*input.releases->unreleased);

  report.profiles = input.profiles;
  report.crossovers = input.crossovers;
  report.maturity = input.maturity;
  report.maturity.maturity_ratio = round2(report.maturity.maturity_ratio);
  report.warnings = input.warnings;
  return report;
}

std::string to_json(const AssessmentReport& report) {
  ordered_json doc;
  doc["schema_version"] = report.schema_version;
  doc["generated_at"] = iso_utc(report.generated_at);
  doc["source"] = report.source;

  // Repository information
  ordered_json repo;
  if (report.metadata) {
    const RepoMetadata& m = *report.metadata;
    repo["name"] = m.name;
    repo["description"] = json_or_null(m.description);
    repo["topics"] = m.topics ? ordered_json(*m.topics) : ordered_json(nullptr);
    repo["api_url"] = m.api_url;
    ordered_json langs = ordered_json::object();
    for (const auto& [name, bytes] : m.languages) langs[name] = bytes;
    repo["languages"] = langs;
    repo["community_health_pct"] =
        m.community_health_pct ? ordered_json(*m.community_health_pct) : ordered_json(nullptr);
  } else {
    repo["name"] = nullptr;
    repo["description"] = nullptr;
    repo["topics"] = nullptr;
    repo["api_url"] = nullptr;
    repo["languages"] = nullptr;
    repo["community_health_pct"] = nullptr;
  }
  doc["repository"] = repo;

  // Repository activeness
  ordered_json act;
  act["age_days"] = round2(report.mining.repo_age_days);
  act["last_updated"] = iso_utc(report.mining.last_updated);
  act["release_count"] = report.mining.release_count;
  act["avg_days_between_releases"] = round2(report.mining.avg_days_between_releases);
  act["total_commits"] = report.mining.total_commits;
  act["open_issues"] =
      report.metadata ? ordered_json(report.metadata->open_issues) : ordered_json(nullptr);

  ordered_json recent = ordered_json::array();
  for (auto it = report.activity.rbegin(); it != report.activity.rend(); ++it) {
    if (recent.size() == 5) break;
    recent.push_back({{"tag", it->tag}, {"date", iso_utc(it->tag_timestamp)}});
  }
  act["recent_releases"] = recent;

  ordered_json commit_activity;
  std::int64_t total_add = 0, total_del = 0;
  ordered_json per_release = ordered_json::array();
  for (const auto& a : report.activity) {
    total_add += a.additions;
    total_del += a.deletions;
    per_release.push_back(activity_row(a, false));
  }
  if (report.unreleased_activity) {
    total_add += report.unreleased_activity->additions;
    total_del += report.unreleased_activity->deletions;
  }
  commit_activity["total_additions"] = total_add;
  commit_activity["total_deletions"] = total_del;
  commit_activity["per_release"] = per_release;
  commit_activity["unreleased"] = report.unreleased_activity
                                      ? activity_row(*report.unreleased_activity, true)
                                      : ordered_json(nullptr);
  act["commit_activity"] = commit_activity;

  ordered_json classification = ordered_json::array();
  for (size_t i = 0; i < report.profiles.size(); ++i) {
    const ActivityProfile& p = report.profiles[i];
    ordered_json row;
    row["ordinal"] = p.ordinal;
    row["tag"] = i < report.activity.size() ? ordered_json(report.activity[i].tag)
                                            : ordered_json(nullptr);
    row["corrective"] = p.corrective;
    row["adaptive"] = p.adaptive;
    row["perfective"] = p.perfective;
    row["unclassified"] = p.unclassified;
    classification.push_back(row);
  }
  act["commit_classification"] = classification;
  doc["activeness"] = act;

  // Security
  ordered_json security;
  if (report.vulnerabilities) {
    ordered_json vulns = ordered_json::array();
    for (const auto& v : *report.vulnerabilities) {
      vulns.push_back({{"advisory_id", v.advisory_id},
                       {"affected_package", v.affected_package},
                       {"severity", to_string(v.severity)},
                       {"summary", v.summary}});
    }
    security["vulnerabilities"] = vulns;
  } else {
    security["vulnerabilities"] = nullptr;
  }
  doc["security"] = security;

  // Community interest
  ordered_json community;
  if (report.community) {
    community["stars"] = report.community->stars;
    community["forks"] = report.community->forks;
    community["watchers"] = report.community->watchers;
  } else {
    community["stars"] = nullptr;
    community["forks"] = nullptr;
    community["watchers"] = nullptr;
  }
  doc["community_interest"] = community;

  // Support
  ordered_json support;
  if (report.support) {
    support["tag"] = report.support->tag;
    support["question_count"] = report.support->question_count;
    support["answered_count"] = report.support->answered_count;
  } else {
    support["tag"] = nullptr;
    support["question_count"] = nullptr;
    support["answered_count"] = nullptr;
  }
  support["tag_defaulted"] = report.support_tag_defaulted;
  doc["support"] = support;

  // Legal requirements
  ordered_json legal;
  if (report.license) {
    legal["license"] = {{"spdx_id", report.license->spdx_id},
                        {"permissions", report.license->permissions},
                        {"conditions", report.license->conditions},
                        {"limitations", report.license->limitations}};
  } else {
    legal["license"] = nullptr;
  }
  doc["legal"] = legal;

  // Commit maturity
  ordered_json maturity;
  maturity["release_count"] = report.maturity.release_count;
  maturity["crossovers"] = {{"adaptive_corrective", report.maturity.adaptive_corrective},
                            {"adaptive_perfective", report.maturity.adaptive_perfective},
                            {"corrective_perfective", report.maturity.corrective_perfective},
                            {"total", report.maturity.total_crossovers}};
  maturity["maturity_ratio"] = round2(report.maturity.maturity_ratio);
  ordered_json events = ordered_json::array();
  for (const auto& e : report.crossovers) {
    events.push_back({{"pair", to_string(e.pair)},
                      {"ordinal", e.at_ordinal},
                      {"rose_above", to_string(e.rose_above)}});
  }
  maturity["events"] = events;
  doc["maturity"] = maturity;

  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

AssessmentReport report_from_json(std::string_view json_text) {
  ordered_json doc = ordered_json::parse(json_text);
  AssessmentReport report;
  report.schema_version = doc.value("schema_version", "1");
  report.generated_at = parse_iso_utc(doc.value("generated_at", "")).value_or(0);
  report.source = doc.value("source", "");

  const auto& repo = doc.at("repository");
  if (repo.contains("name") && repo["name"].is_string()) {
    RepoMetadata m;
    m.name = repo["name"].get<std::string>();
    if (repo["description"].is_string()) m.description = repo["description"].get<std::string>();
    if (repo["topics"].is_array()) m.topics = repo["topics"].get<std::vector<std::string>>();
    m.api_url = repo.value("api_url", "");
    if (repo["languages"].is_object())
      for (const auto& [name, bytes] : repo["languages"].items())
        m.languages.emplace_back(name, bytes.get<std::int64_t>());
    if (repo["community_health_pct"].is_number())
      m.community_health_pct = repo["community_health_pct"].get<int>();
    const auto& act = doc.at("activeness");
    if (act.contains("open_issues") && act["open_issues"].is_number())
      m.open_issues = act["open_issues"].get<std::int64_t>();
    report.metadata = std::move(m);
  }

  const auto& act = doc.at("activeness");
  report.mining.repo_age_days = act.value("age_days", 0.0);
  report.mining.last_updated = parse_iso_utc(act.value("last_updated", "")).value_or(0);
  report.mining.release_count = act.value("release_count", 0);
  report.mining.avg_days_between_releases = act.value("avg_days_between_releases", 0.0);
  report.mining.total_commits = act.value("total_commits", std::int64_t{0});
  for (const auto& row : act.at("commit_activity").at("per_release"))
    report.activity.push_back(activity_from_row(row));
  if (act.at("commit_activity").contains("unreleased") &&
      act["commit_activity"]["unreleased"].is_object())
    report.unreleased_activity = activity_from_row(act["commit_activity"]["unreleased"]);
  for (const auto& row : act.at("commit_classification")) {
    ActivityProfile p;
    p.ordinal = row.value("ordinal", 0);
    p.corrective = row.value("corrective", std::int64_t{0});
    p.adaptive = row.value("adaptive", std::int64_t{0});
    p.perfective = row.value("perfective", std::int64_t{0});
    p.unclassified = row.value("unclassified", std::int64_t{0});
    report.profiles.push_back(p);
  }

  const auto& security = doc.at("security");
  if (security.contains("vulnerabilities") && security["vulnerabilities"].is_array()) {
    std::vector<VulnerabilityFinding> vulns;
    for (const auto& row : security["vulnerabilities"]) {
      VulnerabilityFinding v;
      v.advisory_id = row.value("advisory_id", "");
      v.affected_package = row.value("affected_package", "");
      v.severity = severity_from_string(row.value("severity", "unknown"));
      v.summary = row.value("summary", "");
      vulns.push_back(std::move(v));
    }
    report.vulnerabilities = std::move(vulns);
  }

  const auto& community = doc.at("community_interest");
  if (community.contains("stars") && community["stars"].is_number()) {
    CommunityInterest c;
    c.stars = community["stars"].get<std::int64_t>();
    c.forks = community.value("forks", std::int64_t{0});
    c.watchers = community.value("watchers", std::int64_t{0});
    report.community = c;
  }

  const auto& support = doc.at("support");
  if (support.contains("tag") && support["tag"].is_string()) {
    SupportStats s;
    s.tag = support["tag"].get<std::string>();
    s.question_count = support.value("question_count", std::int64_t{0});
    s.answered_count = support.value("answered_count", std::int64_t{0});
    report.support = s;
  }
  report.support_tag_defaulted = support.value("tag_defaulted", false);

  const auto& legal = doc.at("legal");
  if (legal.contains("license") && legal["license"].is_object()) {
    LicenseInfo lic;
    lic.spdx_id = legal["license"].value("spdx_id", "NOASSERTION");
    lic.permissions = legal["license"].value("permissions", std::vector<std::string>{});
    lic.conditions = legal["license"].value("conditions", std::vector<std::string>{});
    lic.limitations = legal["license"].value("limitations", std::vector<std::string>{});
    report.license = std::move(lic);
  }

  const auto& maturity = doc.at("maturity");
  report.maturity.release_count = maturity.value("release_count", 0);
  const auto& counts = maturity.at("crossovers");
  report.maturity.adaptive_corrective = counts.value("adaptive_corrective", std::int64_t{0});
  report.maturity.adaptive_perfective = counts.value("adaptive_perfective", std::int64_t{0});
  report.maturity.corrective_perfective = counts.value("corrective_perfective", std::int64_t{0});
  report.maturity.total_crossovers = counts.value("total", std::int64_t{0});
  report.maturity.maturity_ratio = maturity.value("maturity_ratio", 0.0);
  for (const auto& row : maturity.at("events")) {
    CrossoverEvent e;
    e.pair = pair_from_string(row.value("pair", ""));
    e.at_ordinal = row.value("ordinal", 0);
    e.rose_above = label_from_string(row.value("rose_above", ""));
    report.crossovers.push_back(e);
  }

  report.warnings = doc.value("warnings", std::vector<std::string>{});
  return report;
}

}  // namespace ossrecon
