#include "ossrecon/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ossrecon/util.hpp"

namespace ossrecon {

const std::vector<std::string>& KeywordTable::stems(ActivityLabel label) const {
  switch (label) {
    case ActivityLabel::Corrective:
      return corrective;
    case ActivityLabel::Adaptive:
      return adaptive;
    case ActivityLabel::Perfective:
      return perfective;
    default:
      throw std::invalid_argument("no stems for label " + to_string(label));
  }
}

void KeywordTable::validate() const {
  std::set<std::string> seen;
  for (ActivityLabel label :
       {ActivityLabel::Corrective, ActivityLabel::Adaptive, ActivityLabel::Perfective}) {
    for (const auto& stem : stems(label)) {
      if (stem.empty()) throw std::invalid_argument("empty keyword stem");
      if (stem != to_lower_ascii(stem))
        throw std::invalid_argument("keyword stem must be lowercase: " + stem);
      if (!seen.insert(stem).second)
        throw std::invalid_argument("keyword stem appears under two labels: " + stem);
    }
  }
  std::set<ActivityLabel> order(priority.begin(), priority.end());
  if (order.size() != 3 || order.count(ActivityLabel::Unclassified))
    throw std::invalid_argument("priority must be a strict total order over the three labels");
}

const KeywordTable& default_keyword_table() {
  static const KeywordTable table = [] {
    KeywordTable t;
    t.corrective = {"fix",   "bug",    "error", "fail",   "crash",
                    "issue", "defect", "patch", "repair", "correct"};
    t.adaptive = {"add",       "new",       "support", "feature", "implement",
                  "introduce", "upgrade",   "port",    "migrate", "enable"};
    t.perfective = {"refactor", "clean",      "cleanup", "simplif", "restructur",
                    "renam",    "polish",     "document", "doc",     "test",
                    "style",    "format",     "optimiz"};
    t.validate();
    return t;
  }();
  return table;
}

KeywordTable parse_keyword_table(std::string_view text) {
  KeywordTable table;
  auto stems_of = [&table](ActivityLabel label) -> std::vector<std::string>* {
    switch (label) {
      case ActivityLabel::Corrective:
        return &table.corrective;
      case ActivityLabel::Adaptive:
        return &table.adaptive;
      default:
        return &table.perfective;
    }
  };

  std::vector<ActivityLabel> section_order;
  std::vector<std::string>* current = nullptr;
  int line_no = 0;

  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = trim(raw);
    if (auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("keyword table line " + std::to_string(line_no) +
                                    ": unterminated section header");
      std::string name = to_lower_ascii(trim(line.substr(1, line.size() - 2)));
      ActivityLabel label;
      if (name == "corrective")
        label = ActivityLabel::Corrective;
      else if (name == "adaptive")
        label = ActivityLabel::Adaptive;
      else if (name == "perfective")
        label = ActivityLabel::Perfective;
      else
        throw std::invalid_argument("keyword table line " + std::to_string(line_no) +
                                    ": unknown section [" + name + "]");
      if (std::find(section_order.begin(), section_order.end(), label) != section_order.end())
        throw std::invalid_argument("keyword table: duplicate section [" + name + "]");
      section_order.push_back(label);
      current = stems_of(label);
      continue;
    }

    if (!current)
      throw std::invalid_argument("keyword table line " + std::to_string(line_no) +
                                  ": stem before any section header");
    std::string stem = to_lower_ascii(line);
    if (std::find(current->begin(), current->end(), stem) == current->end())
      current->push_back(std::move(stem));
  }

  if (section_order.size() != 3)
    throw std::invalid_argument("keyword table must declare all three sections");
  std::copy(section_order.begin(), section_order.end(), table.priority.begin());
  table.validate();
  return table;
}

KeywordTable load_keyword_table(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read keyword table: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_keyword_table(ss.str());
}

namespace {

std::vector<std::string_view> tokenize(const std::string& lowered) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  const size_t n = lowered.size();
  auto alnum = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  };
  while (i < n) {
    while (i < n && !alnum(lowered[i])) ++i;
    size_t start = i;
    while (i < n && alnum(lowered[i])) ++i;
    if (i > start) tokens.emplace_back(lowered.data() + start, i - start);
  }
  return tokens;
}

}  // namespace

ActivityLabel classify_message(std::string_view message, const KeywordTable& table,
                               std::vector<std::string>* matched) {
  std::string lowered = to_lower_ascii(message);
  std::vector<std::string_view> tokens = tokenize(lowered);

  int scores[3] = {0, 0, 0};
  const ActivityLabel labels[3] = {ActivityLabel::Corrective, ActivityLabel::Adaptive,
                                   ActivityLabel::Perfective};
  for (int li = 0; li < 3; ++li) {
    for (const auto& stem : table.stems(labels[li])) {
      bool hit = std::any_of(tokens.begin(), tokens.end(),
                             [&](std::string_view t) { return t.starts_with(stem); });
      if (hit) {
        ++scores[li];
        if (matched) matched->push_back(stem);
      }
    }
  }

  if (scores[0] + scores[1] + scores[2] == 0) return ActivityLabel::Unclassified;

  auto score_of = [&](ActivityLabel label) {
    for (int li = 0; li < 3; ++li)
      if (labels[li] == label) return scores[li];
    return 0;
  };
  int max_score = std::max({scores[0], scores[1], scores[2]});
  for (ActivityLabel label : table.priority) {
    if (score_of(label) == max_score) return label;
  }
  return ActivityLabel::Unclassified;  // unreachable with a valid table
}

ClassifiedCommit classify(const Commit& commit, const KeywordTable& table) {
  ClassifiedCommit out;
  out.commit = commit;
  out.label = classify_message(commit.message, table, &out.matched_keywords);
  return out;
}

ActivityProfile profile_release(const ReleaseWindow& window, const KeywordTable& table,
                                MergePolicy merges) {
  ActivityProfile profile;
  profile.ordinal = window.ordinal;
  for (const Commit& c : window.commits) {
    ActivityLabel label = (merges == MergePolicy::CountAsUnclassified && c.is_merge)
                              ? ActivityLabel::Unclassified
                              : classify_message(c.message, table);
    switch (label) {
      case ActivityLabel::Corrective:
        ++profile.corrective;
        break;
      case ActivityLabel::Adaptive:
        ++profile.adaptive;
        break;
      case ActivityLabel::Perfective:
        ++profile.perfective;
        break;
      case ActivityLabel::Unclassified:
        ++profile.unclassified;
        break;
    }
  }
  return profile;
}

std::vector<ActivityProfile> profile_releases_serial(std::span<const ReleaseWindow> windows,
                                                     const KeywordTable& table,
                                                     MergePolicy merges) {
  std::vector<ActivityProfile> profiles(windows.size());
  for (size_t i = 0; i < windows.size(); ++i)
    profiles[i] = profile_release(windows[i], table, merges);
  return profiles;
}

std::vector<ActivityProfile> profile_releases(std::span<const ReleaseWindow> windows,
                                              const KeywordTable& table, MergePolicy merges) {
  std::vector<ActivityProfile> profiles(windows.size());
  const auto n = static_cast<std::int64_t>(windows.size());
  // Dynamic schedule: window sizes are wildly uneven in real histories.
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i)
    profiles[static_cast<size_t>(i)] = profile_release(windows[static_cast<size_t>(i)], table, merges);
  return profiles;
}

}  // namespace ossrecon
