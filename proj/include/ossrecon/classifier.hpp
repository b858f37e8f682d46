#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ossrecon/maturity.hpp"
#include "ossrecon/miner.hpp"

namespace ossrecon {

/// Keyword model: per-label lowercase stems plus a tie-break priority order.
/// A stem matches when it is a prefix of any token of the lowercased message.
struct KeywordTable {
  std::vector<std::string> corrective;
  std::vector<std::string> adaptive;
  std::vector<std::string> perfective;

  // Highest priority first; breaks score ties.
  std::array<ActivityLabel, 3> priority{ActivityLabel::Corrective, ActivityLabel::Adaptive,
                                        ActivityLabel::Perfective};

  const std::vector<std::string>& stems(ActivityLabel label) const;

  /// Throws std::invalid_argument when a stem appears under two labels or the
  /// priority order is not a strict total order over the three labels.
  void validate() const;
};

/// The table the tool ships with (also available as data/keywords.conf).
const KeywordTable& default_keyword_table();

/// Parses the plain-text table format: `[corrective]` / `[adaptive]` /
/// `[perfective]` section headers in priority order (highest first), one stem
/// per line, `#` comments. All three sections must appear exactly once.
KeywordTable parse_keyword_table(std::string_view text);
KeywordTable load_keyword_table(const std::filesystem::path& file);

struct ClassifiedCommit {
  Commit commit;
  ActivityLabel label = ActivityLabel::Unclassified;
  std::vector<std::string> matched_keywords;  // empty iff label == Unclassified
};

/// Pure function of (message, table): lowercase, tokenize on non-alphanumeric
/// boundaries, score each label by how many of its stems prefix some token,
/// highest score wins, priority order breaks ties, zero score -> Unclassified.
ActivityLabel classify_message(std::string_view message, const KeywordTable& table,
                               std::vector<std::string>* matched = nullptr);

ClassifiedCommit classify(const Commit& commit, const KeywordTable& table);

enum class MergePolicy {
  Classify,             // merge commits are classified like any other (default)
  CountAsUnclassified,  // merge commits skip classification and land in the U bucket
};

/// Counts labels over one window. C + A + P + U always equals the commit count.
ActivityProfile profile_release(const ReleaseWindow& window, const KeywordTable& table,
                                MergePolicy merges = MergePolicy::Classify);

/// Profiles every window. Windows are independent, so this is the parallel
/// kernel (OpenMP when enabled); profile_releases_serial is the reference.
std::vector<ActivityProfile> profile_releases(std::span<const ReleaseWindow> windows,
                                              const KeywordTable& table,
                                              MergePolicy merges = MergePolicy::Classify);

std::vector<ActivityProfile> profile_releases_serial(std::span<const ReleaseWindow> windows,
                                                     const KeywordTable& table,
                                                     MergePolicy merges = MergePolicy::Classify);

}  // namespace ossrecon
