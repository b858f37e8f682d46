#include "ossrecon/maturity.hpp"

#include <algorithm>
#include <stdexcept>

namespace ossrecon {

std::string to_string(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Corrective:
      return "corrective";
    case ActivityLabel::Adaptive:
      return "adaptive";
    case ActivityLabel::Perfective:
      return "perfective";
    case ActivityLabel::Unclassified:
      return "unclassified";
  }
  return "unclassified";
}

std::string to_string(ActivityPair pair) {
  switch (pair) {
    case ActivityPair::AdaptiveCorrective:
      return "adaptive_corrective";
    case ActivityPair::AdaptivePerfective:
      return "adaptive_perfective";
    case ActivityPair::CorrectivePerfective:
      return "corrective_perfective";
  }
  return "adaptive_corrective";
}

ActivityLabel first_of(ActivityPair pair) {
  return pair == ActivityPair::CorrectivePerfective ? ActivityLabel::Corrective
                                                    : ActivityLabel::Adaptive;
}

ActivityLabel second_of(ActivityPair pair) {
  return pair == ActivityPair::AdaptiveCorrective ? ActivityLabel::Corrective
                                                  : ActivityLabel::Perfective;
}

std::int64_t series_value(const ActivityProfile& p, ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Corrective:
      return p.corrective;
    case ActivityLabel::Adaptive:
      return p.adaptive;
    case ActivityLabel::Perfective:
      return p.perfective;
    default:
      throw std::invalid_argument("unclassified is not a crossover series");
  }
}

std::vector<CrossoverEvent> detect_crossovers(std::span<const ActivityProfile> profiles,
                                              ActivityPair pair) {
  std::vector<CrossoverEvent> events;
  if (profiles.size() < 2) return events;

  const ActivityLabel x = first_of(pair);
  const ActivityLabel y = second_of(pair);

  for (size_t i = 1; i < profiles.size(); ++i) {
    std::int64_t before = series_value(profiles[i - 1], x) - series_value(profiles[i - 1], y);
    std::int64_t after = series_value(profiles[i], x) - series_value(profiles[i], y);
    // Strict crossing only: both differences nonzero, opposite sign. Touching
    // the other series (equality) at either endpoint does not count.
    if (before != 0 && after != 0 && (before > 0) != (after > 0)) {
      events.push_back({pair, profiles[i].ordinal, after > 0 ? x : y});
    }
  }
  return events;
}

std::vector<CrossoverEvent> all_crossovers(std::span<const ActivityProfile> profiles) {
  std::vector<CrossoverEvent> events;
  for (ActivityPair pair : kAllPairs) {
    auto pair_events = detect_crossovers(profiles, pair);
    events.insert(events.end(), pair_events.begin(), pair_events.end());
  }
  std::sort(events.begin(), events.end(), [](const CrossoverEvent& a, const CrossoverEvent& b) {
    if (a.at_ordinal != b.at_ordinal) return a.at_ordinal < b.at_ordinal;
    return static_cast<int>(a.pair) < static_cast<int>(b.pair);
  });
  return events;
}

MaturityScore maturity_score(std::span<const ActivityProfile> profiles) {
  MaturityScore score;
  score.release_count = static_cast<int>(profiles.size());
  score.adaptive_corrective =
      static_cast<std::int64_t>(detect_crossovers(profiles, ActivityPair::AdaptiveCorrective).size());
  score.adaptive_perfective =
      static_cast<std::int64_t>(detect_crossovers(profiles, ActivityPair::AdaptivePerfective).size());
  score.corrective_perfective = static_cast<std::int64_t>(
      detect_crossovers(profiles, ActivityPair::CorrectivePerfective).size());
  score.total_crossovers =
      score.adaptive_corrective + score.adaptive_perfective + score.corrective_perfective;
  score.maturity_ratio = score.release_count == 0
                             ? 0.0
                             : static_cast<double>(score.total_crossovers) / score.release_count;
  return score;
}

}  // namespace ossrecon
