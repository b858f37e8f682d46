// Acceptance gate: one check per shipped guarantee, one PASS/FAIL line each.
// Exit code is the number of failed checks, so `ctest` shows the gate red if
// any guarantee regresses.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crossover_oracle.hpp"
#include "corpus.hpp"
#include "json.hpp"
#include "ossrecon/classifier.hpp"
#include "ossrecon/pipeline.hpp"
#include "ossrecon/report.hpp"
#include "testserver.hpp"
#include "testutil.hpp"

using namespace ossrecon;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& detail) {
  if (!condition) throw CheckFailure(detail);
}

std::vector<std::int64_t> series_of(const std::vector<ActivityProfile>& profiles,
                                    ActivityLabel label) {
  std::vector<std::int64_t> out;
  for (const auto& p : profiles) out.push_back(series_value(p, label));
  return out;
}

void set_series(ActivityProfile& p, ActivityLabel label, std::int64_t v) {
  switch (label) {
    case ActivityLabel::Corrective:
      p.corrective = v;
      return;
    case ActivityLabel::Adaptive:
      p.adaptive = v;
      return;
    case ActivityLabel::Perfective:
      p.perfective = v;
      return;
    default:
      p.unclassified = v;
  }
}

std::vector<ActivityProfile> random_profiles(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> length_dist(2, 50);
  std::uniform_int_distribution<std::int64_t> value_dist(0, 100);
  std::vector<ActivityProfile> profiles(length_dist(rng));
  for (size_t i = 0; i < profiles.size(); ++i) {
    profiles[i].ordinal = static_cast<int>(i);
    profiles[i].corrective = value_dist(rng);
    profiles[i].adaptive = value_dist(rng);
    profiles[i].perfective = value_dist(rng);
    profiles[i].unclassified = value_dist(rng);
  }
  return profiles;
}

/// A1: the pair counters agree exactly with an independent brute-force
/// reference on 1,000 random series triples, in under five seconds.
void check_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260813);
  for (int round = 0; round < 1000; ++round) {
    const std::vector<ActivityProfile> profiles = random_profiles(rng);
    const auto c = series_of(profiles, ActivityLabel::Corrective);
    const auto a = series_of(profiles, ActivityLabel::Adaptive);
    const auto p = series_of(profiles, ActivityLabel::Perfective);

    MaturityScore score = maturity_score(profiles);
    const int ac = oracle::count_crossings(a, c);
    const int ap = oracle::count_crossings(a, p);
    const int cp = oracle::count_crossings(c, p);
    require(score.adaptive_corrective == ac, "adaptive/corrective count diverged from oracle");
    require(score.adaptive_perfective == ap, "adaptive/perfective count diverged from oracle");
    require(score.corrective_perfective == cp, "corrective/perfective count diverged from oracle");
    require(score.total_crossovers == ac + ap + cp, "total is not the sum of the pair counts");
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(elapsed < 5.0, "oracle comparison exceeded the five-second budget");
}

/// A2: a crossover is reported at boundary i iff (X_{i-1}-Y_{i-1})*(X_i-Y_i)
/// < 0 — exhaustively for all series pairs over {0,1,2} and lengths 2..4.
void check_sign_product_rule() {
  for (int length = 2; length <= 4; ++length) {
    std::int64_t combos = 1;
    for (int i = 0; i < length; ++i) combos *= 9;
    for (ActivityPair pair : kAllPairs) {
      for (std::int64_t assignment = 0; assignment < combos; ++assignment) {
        std::vector<ActivityProfile> profiles(length);
        std::vector<std::int64_t> xs(length), ys(length);
        std::int64_t v = assignment;
        for (int i = 0; i < length; ++i) {
          xs[i] = v % 3;
          ys[i] = (v / 3) % 3;
          v /= 9;
          profiles[i].ordinal = i;
          set_series(profiles[i], first_of(pair), xs[i]);
          set_series(profiles[i], second_of(pair), ys[i]);
        }
        std::vector<CrossoverEvent> events = detect_crossovers(profiles, pair);
        std::vector<bool> reported(length, false);
        for (const auto& e : events) reported[e.at_ordinal] = true;
        for (int i = 1; i < length; ++i) {
          const std::int64_t product = (xs[i - 1] - ys[i - 1]) * (xs[i] - ys[i]);
          if (reported[i] != (product < 0)) {
            std::ostringstream what;
            what << "sign rule violated at boundary " << i << " for pair " << to_string(pair)
                 << " (assignment " << assignment << ", length " << length << ")";
            throw CheckFailure(what.str());
          }
        }
      }
    }
  }
}

/// A3: 23 releases engineered to cross exactly 21 times report total 21 and
/// the two-decimal ratio 0.91, string-compared in the JSON document.
void check_ratio_rendering() {
  const int releases_n = 23;
  std::vector<ActivityProfile> profiles(releases_n);
  for (int i = 0; i < releases_n; ++i) {
    profiles[i].ordinal = i;
    profiles[i].corrective = 2;
    profiles[i].perfective = 0;
    profiles[i].adaptive = (i % 2 == 0) ? 3 : 1;
  }
  profiles[22].adaptive = profiles[21].adaptive;  // the last boundary stays flat

  MaturityScore score = maturity_score(profiles);
  require(score.total_crossovers == 21,
          "constructed fixture produced " + std::to_string(score.total_crossovers) +
              " crossovers instead of 21");
  require(score.adaptive_corrective == 21, "all 21 crossings should be adaptive/corrective");

  ReleaseSet releases;
  for (int i = 0; i < releases_n; ++i) {
    ReleaseWindow w;
    w.ordinal = i;
    w.tag_name = "v" + std::to_string(i + 1);
    w.tag_timestamp = testutil::at_day(i * 10);
    Commit c;
    c.hash = "f";
    c.author_timestamp = testutil::at_day(i * 10);
    c.message = "release prep\n";
    w.commits.push_back(std::move(c));
    releases.windows.push_back(std::move(w));
  }

  AssembleInput input;
  input.source = "fixture";
  input.generated_at = testutil::at_day(300);
  input.releases = &releases;
  input.mining = mining_summary(releases, testutil::at_day(300));
  input.profiles = profiles;
  input.crossovers = all_crossovers(profiles);
  input.maturity = score;

  const std::string json_text = to_json(assemble(input));
  require(json_text.find("\"total\": 21") != std::string::npos,
          "JSON does not show a crossover total of 21");
  require(json_text.find("\"maturity_ratio\": 0.91") != std::string::npos,
          "JSON does not render 21/23 as the two-decimal ratio 0.91");
}

/// A4: the classifier reproduces the hand-derived 200-message answer key
/// twice over, and per-window label counts always partition the commit count.
void check_classifier_key_and_partition() {
  const KeywordTable& table = default_keyword_table();
  const auto& key = corpus::labeled_messages();
  require(key.size() == 200, "corpus must hold exactly 200 messages");

  for (int repeat = 0; repeat < 2; ++repeat) {
    for (const auto& entry : key) {
      if (classify_message(entry.message, table) != entry.expected)
        throw CheckFailure(std::string("misclassified: \"") + entry.message + "\"");
    }
  }

  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<size_t> size_dist(0, 120);
  std::uniform_int_distribution<size_t> pick(0, key.size() - 1);
  std::vector<ReleaseWindow> windows(50);
  std::vector<ActivityProfile> expected(50);
  for (size_t w = 0; w < windows.size(); ++w) {
    windows[w].ordinal = static_cast<int>(w);
    expected[w].ordinal = static_cast<int>(w);
    const size_t size = size_dist(rng);
    for (size_t i = 0; i < size; ++i) {
      const auto& entry = key[pick(rng)];
      Commit c;
      c.hash = "x";
      c.message = entry.message;
      windows[w].commits.push_back(std::move(c));
      switch (entry.expected) {
        case ActivityLabel::Corrective:
          ++expected[w].corrective;
          break;
        case ActivityLabel::Adaptive:
          ++expected[w].adaptive;
          break;
        case ActivityLabel::Perfective:
          ++expected[w].perfective;
          break;
        case ActivityLabel::Unclassified:
          ++expected[w].unclassified;
          break;
      }
    }
  }

  std::vector<ActivityProfile> profiles = profile_releases(windows, table);
  require(profiles.size() == windows.size(), "one profile per window");
  for (size_t w = 0; w < windows.size(); ++w) {
    const auto& p = profiles[w];
    const auto total = static_cast<std::int64_t>(windows[w].commits.size());
    require(p.corrective + p.adaptive + p.perfective + p.unclassified == total,
            "window " + std::to_string(w) + ": labels do not partition the commit count");
    require(p == expected[w], "window " + std::to_string(w) + ": counts differ from the key");
  }
}

/// A5: the hand-counted git fixture (12 commits, tags at days 0/10/40) mines
/// into windows of 3/4/3 and an average release gap of exactly 20 days.
void check_mining_fixture() {
  testutil::TempDir tmp;
  testutil::GitFixture repo = testutil::standard_fixture(tmp.path() / "fixture");

  OpenOptions opts;
  opts.workdir = tmp.path() / "cache";
  RepoHandle handle = open_repository(repo.path().string(), opts);
  ReleaseSet releases = enumerate_releases(handle);

  require(releases.windows.size() == 3, "expected exactly three release windows");
  const size_t sizes[] = {3, 4, 3};
  for (size_t i = 0; i < 3; ++i) {
    require(releases.windows[i].commits.size() == sizes[i],
            "window " + std::to_string(i) + " should hold " + std::to_string(sizes[i]) +
                " commits, has " + std::to_string(releases.windows[i].commits.size()));
  }
  require(releases.unreleased.has_value() && releases.unreleased->commits.size() == 2,
          "two commits past the last tag should form the unreleased window");

  MiningSummary summary = mining_summary(releases, testutil::at_day(50));
  require(summary.release_count == 3, "release count should be 3");
  require(summary.total_commits == 12, "total commits should be 12");
  require(summary.avg_days_between_releases == 20.0,
          "average days between releases must equal 20 exactly");
}

/// A6: the JSON document carries every attribute-group metric: repository
/// identity, activeness, security, community interest, support and legal.
void check_report_field_completeness() {
  ReleaseSet releases;
  for (int i = 0; i < 2; ++i) {
    ReleaseWindow w;
    w.ordinal = i;
    w.tag_name = "v" + std::to_string(i + 1);
    w.tag_timestamp = testutil::at_day(i * 7);
    Commit c;
    c.hash = "f";
    c.author_timestamp = testutil::at_day(i * 7);
    c.message = "fix\n";
    c.additions = 3;
    w.commits.push_back(std::move(c));
    releases.windows.push_back(std::move(w));
  }

  AssembleInput input;
  input.source = "fixture";
  input.generated_at = testutil::at_day(20);
  RepoMetadata meta;
  meta.name = "widget";
  meta.description = "d";
  meta.topics = std::vector<std::string>{"t"};
  meta.api_url = "https://api.example.test/repos/acme/widget";
  meta.languages = {{"C++", 10}};
  meta.community_health_pct = 80;
  meta.open_issues = 2;
  input.metadata = meta;
  input.community = CommunityInterest{1, 2, 3};
  input.license = LicenseInfo{"MIT", {"p"}, {"c"}, {"l"}};
  input.support = SupportStats{"widget", 5, 4};
  input.vulnerabilities =
      std::vector<VulnerabilityFinding>{{"OSV-1", "dep", Severity::Low, "s"}};
  input.releases = &releases;
  input.mining = mining_summary(releases, testutil::at_day(20));
  input.profiles = {{0, 1, 0, 0, 0}, {1, 1, 0, 0, 0}};
  input.maturity = maturity_score(input.profiles);

  ordered_json doc = ordered_json::parse(to_json(assemble(input)));

  const std::vector<std::pair<const char*, std::vector<const char*>>> required = {
      {"repository",
       {"name", "description", "topics", "api_url", "languages", "community_health_pct"}},
      {"activeness",
       {"age_days", "last_updated", "release_count", "avg_days_between_releases",
        "total_commits", "open_issues", "recent_releases", "commit_activity",
        "commit_classification"}},
      {"security", {"vulnerabilities"}},
      {"community_interest", {"stars", "forks", "watchers"}},
      {"support", {"tag", "question_count", "answered_count", "tag_defaulted"}},
      {"maturity", {"release_count", "crossovers", "maturity_ratio", "events"}},
  };
  for (const auto& [group, fields] : required) {
    require(doc.contains(group), std::string("missing group: ") + group);
    for (const char* field : fields) {
      require(doc[group].contains(field),
              std::string(group) + " is missing the '" + field + "' field");
      require(!doc[group][field].is_null(),
              std::string(group) + "." + field + " should be populated in this fixture");
    }
  }
  require(doc["legal"].contains("license"), "legal group is missing the license");
  for (const char* field : {"spdx_id", "permissions", "conditions", "limitations"}) {
    require(doc["legal"]["license"].contains(field),
            std::string("license is missing the '") + field + "' field");
  }
  for (const char* field : {"adaptive_corrective", "adaptive_perfective", "corrective_perfective",
                            "total"}) {
    require(doc["maturity"]["crossovers"].contains(field),
            std::string("crossover counts are missing '") + field + "'");
  }
}

/// A7: the CLI binary, in replay mode against recorded fixtures, produces
/// byte-identical JSON and HTML across two runs, each well within a minute.
void check_cli_replay_determinism() {
  testutil::TempDir tmp;
  testutil::GitFixture repo = testutil::standard_fixture(tmp.path() / "widget");
  testutil::write_file(repo.path() / "requirements.txt", "flask==2.0.1\n");
  testutil::run_git(repo.path(),
                    {"remote", "add", "origin", "https://ignored.example/acme/widget.git"});

  testutil::TestServer server;
  server.svr().Get("/repos/acme/widget", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"name": "widget", "url": "https://api.example.test/repos/acme/widget",
                        "description": "d", "topics": ["cpp"], "stargazers_count": 1,
                        "forks_count": 2, "subscribers_count": 3, "open_issues_count": 4,
                        "license": {"key": "mit", "spdx_id": "MIT"}})",
                    "application/json");
  });
  server.svr().Get("/repos/acme/widget/languages",
                   [](const httplib::Request&, httplib::Response& res) {
                     res.set_content(R"({"C++": 100})", "application/json");
                   });
  server.svr().Get("/repos/acme/widget/community/profile",
                   [](const httplib::Request&, httplib::Response& res) {
                     res.set_content(R"({"health_percentage": 90})", "application/json");
                   });
  server.svr().Get("/licenses/mit", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"key": "mit", "spdx_id": "MIT", "permissions": ["p"],
                        "conditions": ["c"], "limitations": ["l"]})",
                    "application/json");
  });
  server.svr().Get("/2.3/questions", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"total": 4})", "application/json");
  });
  server.svr().Get("/2.3/search/advanced", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"total": 2})", "application/json");
  });
  server.svr().Post("/v1/query", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{}", "application/json");
  });
  server.start();

  const std::string cli = OSSRECON_CLI_PATH;
  const fs::path fixtures = tmp.path() / "fixtures";
  auto run_cli = [&](const std::string& mode, const fs::path& out) {
    std::vector<std::string> argv = {cli,
                                     "assess",
                                     repo.path().string(),
                                     "--mode",
                                     mode,
                                     "--out",
                                     out.string(),
                                     "--fixtures",
                                     fixtures.string(),
                                     "--github-api",
                                     server.url(),
                                     "--stackexchange-api",
                                     server.url(),
                                     "--osv-api",
                                     server.url(),
                                     "--timeout",
                                     "120"};
    CommandResult result = run_command(argv);
    require(result.exit_code == 0, "CLI " + mode + " run failed (exit " +
                                       std::to_string(result.exit_code) + "): " + result.err);
  };

  run_cli("record", tmp.path() / "record-out");

  const auto replay_started = std::chrono::steady_clock::now();
  run_cli("replay", tmp.path() / "replay1");
  run_cli("replay", tmp.path() / "replay2");
  const double replay_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - replay_started).count();
  require(replay_seconds < 60.0, "two replay runs must finish inside sixty seconds");

  for (const char* name : {"report.json", "report.html"}) {
    const std::string first = testutil::read_file(tmp.path() / "replay1" / name);
    const std::string second = testutil::read_file(tmp.path() / "replay2" / name);
    require(!first.empty(), std::string(name) + " is empty");
    require(first == second, std::string(name) + " differs between identical replay runs");
  }
}

/// A8: crossover counts are invariant under series reversal and under scaling
/// all counts by a positive factor — 500 random inputs each, no exceptions.
void check_invariances() {
  std::mt19937_64 rng(97531);
  std::uniform_int_distribution<std::int64_t> scale_dist(1, 9);

  for (int round = 0; round < 500; ++round) {
    const std::vector<ActivityProfile> profiles = random_profiles(rng);
    const MaturityScore base = maturity_score(profiles);

    std::vector<ActivityProfile> reversed(profiles.rbegin(), profiles.rend());
    for (size_t i = 0; i < reversed.size(); ++i) reversed[i].ordinal = static_cast<int>(i);
    const MaturityScore mirrored = maturity_score(reversed);
    require(mirrored.adaptive_corrective == base.adaptive_corrective &&
                mirrored.adaptive_perfective == base.adaptive_perfective &&
                mirrored.corrective_perfective == base.corrective_perfective,
            "reversing the release order changed a crossover count");
  }

  for (int round = 0; round < 500; ++round) {
    const std::vector<ActivityProfile> profiles = random_profiles(rng);
    const MaturityScore base = maturity_score(profiles);

    const std::int64_t k = scale_dist(rng);
    std::vector<ActivityProfile> scaled = profiles;
    for (auto& p : scaled) {
      p.corrective *= k;
      p.adaptive *= k;
      p.perfective *= k;
    }
    const MaturityScore stretched = maturity_score(scaled);
    require(stretched.adaptive_corrective == base.adaptive_corrective &&
                stretched.adaptive_perfective == base.adaptive_perfective &&
                stretched.corrective_perfective == base.corrective_perfective,
            "scaling every count by " + std::to_string(k) + " changed a crossover count");
  }
}

struct Criterion {
  const char* id;
  const char* summary;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"A1", "pair counters match the brute-force oracle on 1000 random triples (< 5 s)",
       check_oracle_equivalence},
      {"A2", "sign-product rule holds exhaustively for values {0,1,2}, lengths 2-4, all pairs",
       check_sign_product_rule},
      {"A3", "23-release fixture reports 21 crossovers and a rendered ratio of 0.91",
       check_ratio_rendering},
      {"A4", "classifier reproduces the 200-message key and partitions 50 random windows",
       check_classifier_key_and_partition},
      {"A5", "git fixture mines into 3/4/3 windows with an exact 20-day release gap",
       check_mining_fixture},
      {"A6", "JSON report carries every metric of all six attribute groups",
       check_report_field_completeness},
      {"A7", "CLI replay runs are byte-identical and fast",
       check_cli_replay_determinism},
      {"A8", "crossover counts survive reversal and positive scaling, 500 rounds each",
       check_invariances},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty()) {
      std::printf("PASS %s %s (%.2fs)\n", criterion.id, criterion.summary, seconds);
    } else {
      ++failures;
      std::printf("FAIL %s %s (%.2fs): %s\n", criterion.id, criterion.summary, seconds,
                  failure.c_str());
    }
    std::fflush(stdout);
  }

  if (failures == 0)
    std::printf("all %zu acceptance checks passed\n", criteria.size());
  else
    std::printf("%d of %zu acceptance checks FAILED\n", failures, criteria.size());
  return failures;
}
