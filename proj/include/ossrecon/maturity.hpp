#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ossrecon {

enum class ActivityLabel { Corrective, Adaptive, Perfective, Unclassified };

std::string to_string(ActivityLabel label);

/// Per-release maintenance-activity counts. Unclassified commits are carried
/// for reporting but never feed crossover detection.
struct ActivityProfile {
  int ordinal = 0;
  std::int64_t corrective = 0;
  std::int64_t adaptive = 0;
  std::int64_t perfective = 0;
  std::int64_t unclassified = 0;

  bool operator==(const ActivityProfile&) const = default;
};

enum class ActivityPair { AdaptiveCorrective, AdaptivePerfective, CorrectivePerfective };

inline constexpr ActivityPair kAllPairs[] = {
    ActivityPair::AdaptiveCorrective,
    ActivityPair::AdaptivePerfective,
    ActivityPair::CorrectivePerfective,
};

std::string to_string(ActivityPair pair);
ActivityLabel first_of(ActivityPair pair);
ActivityLabel second_of(ActivityPair pair);

/// The profile's count for one of the three crossover series.
/// Throws std::invalid_argument for Unclassified.
std::int64_t series_value(const ActivityProfile& p, ActivityLabel label);

/// One detected crossing at a release boundary: between ordinal-1 and ordinal,
/// the two series swapped strict order. rose_above names the series that ended on top.
struct CrossoverEvent {
  ActivityPair pair;
  int at_ordinal = 0;  // >= 1
  ActivityLabel rose_above = ActivityLabel::Unclassified;

  bool operator==(const CrossoverEvent&) const = default;
};

struct MaturityScore {
  std::int64_t adaptive_corrective = 0;
  std::int64_t adaptive_perfective = 0;
  std::int64_t corrective_perfective = 0;
  std::int64_t total_crossovers = 0;
  int release_count = 0;
  double maturity_ratio = 0.0;  // total_crossovers / release_count, 0 when no releases

  bool operator==(const MaturityScore&) const = default;
};

/// Emits an event for each consecutive ordinal pair where the two series hold
/// strict, opposite orderings on both sides. Equality at either endpoint is
/// not a crossing. Both directions count.
std::vector<CrossoverEvent> detect_crossovers(std::span<const ActivityProfile> profiles,
                                              ActivityPair pair);

/// All three pairs, ordered by (ordinal, pair).
std::vector<CrossoverEvent> all_crossovers(std::span<const ActivityProfile> profiles);

MaturityScore maturity_score(std::span<const ActivityProfile> profiles);

}  // namespace ossrecon
