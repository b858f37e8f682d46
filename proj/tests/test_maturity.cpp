#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "crossover_oracle.hpp"
#include "doctest.h"
#include "ossrecon/maturity.hpp"
#include "ossrecon/util.hpp"

using namespace ossrecon;

namespace {

std::vector<ActivityProfile> make_profiles(const std::vector<std::int64_t>& corrective,
                                           const std::vector<std::int64_t>& adaptive,
                                           const std::vector<std::int64_t>& perfective) {
  std::vector<ActivityProfile> profiles(corrective.size());
  for (size_t i = 0; i < corrective.size(); ++i) {
    profiles[i].ordinal = static_cast<int>(i);
    profiles[i].corrective = corrective[i];
    profiles[i].adaptive = adaptive[i];
    profiles[i].perfective = perfective[i];
  }
  return profiles;
}

}  // namespace

TEST_CASE("a single strict swap is one crossover, in either direction") {
  // A: 3 -> 1, C: 2 -> 2 stays between them.
  auto profiles = make_profiles({2, 2}, {3, 1}, {0, 0});
  auto events = detect_crossovers(profiles, ActivityPair::AdaptiveCorrective);
  REQUIRE(events.size() == 1);
  CHECK(events[0].at_ordinal == 1);
  CHECK(events[0].pair == ActivityPair::AdaptiveCorrective);
  CHECK(events[0].rose_above == ActivityLabel::Corrective);

  auto reversed = make_profiles({2, 2}, {1, 3}, {0, 0});
  auto up = detect_crossovers(reversed, ActivityPair::AdaptiveCorrective);
  REQUIRE(up.size() == 1);
  CHECK(up[0].rose_above == ActivityLabel::Adaptive);
}

TEST_CASE("touching or landing on equality is not a crossover") {
  // Meet exactly, then separate on the same side: no crossing anywhere.
  CHECK(detect_crossovers(make_profiles({2, 2, 2}, {3, 2, 3}, {0, 0, 0}),
                          ActivityPair::AdaptiveCorrective)
            .empty());
  // Meet exactly, then separate on the opposite side: still no crossing,
  // because neither boundary has strict order on both sides.
  CHECK(detect_crossovers(make_profiles({2, 2, 2}, {3, 2, 1}, {0, 0, 0}),
                          ActivityPair::AdaptiveCorrective)
            .empty());
}

TEST_CASE("fewer than two profiles can never cross") {
  CHECK(detect_crossovers({}, ActivityPair::AdaptiveCorrective).empty());
  CHECK(detect_crossovers(make_profiles({5}, {1}, {0}), ActivityPair::AdaptiveCorrective).empty());
}

TEST_CASE("unclassified counts never affect crossovers") {
  auto profiles = make_profiles({2, 2}, {3, 1}, {0, 0});
  auto with_noise = profiles;
  with_noise[0].unclassified = 50;
  with_noise[1].unclassified = 7;
  CHECK(all_crossovers(profiles) == all_crossovers(with_noise));
}

TEST_CASE("oracle equivalence on 1000 random series triples") {
  std::mt19937_64 rng(20260813);
  std::uniform_int_distribution<int> length_dist(2, 50);
  std::uniform_int_distribution<std::int64_t> value_dist(0, 100);

  for (int trial = 0; trial < 1000; ++trial) {
    const int length = length_dist(rng);
    std::vector<std::int64_t> c(length), a(length), p(length);
    for (int i = 0; i < length; ++i) {
      c[i] = value_dist(rng);
      a[i] = value_dist(rng);
      p[i] = value_dist(rng);
    }
    auto profiles = make_profiles(c, a, p);
    MaturityScore score = maturity_score(profiles);

    REQUIRE(score.adaptive_corrective == oracle::count_crossings(a, c));
    REQUIRE(score.adaptive_perfective == oracle::count_crossings(a, p));
    REQUIRE(score.corrective_perfective == oracle::count_crossings(c, p));
    REQUIRE(score.total_crossovers ==
            score.adaptive_corrective + score.adaptive_perfective + score.corrective_perfective);
    REQUIRE(score.release_count == length);
  }
}

TEST_CASE("boundary formula holds exhaustively for values in {0,1,2}, length <= 4") {
  // For every adjacent pair of profiles, a crossover is reported exactly when
  // (X[i-1]-Y[i-1]) * (X[i]-Y[i]) < 0.
  for (int length = 2; length <= 4; ++length) {
    const int cells = 2 * length;  // two independent series per pair check
    int combos = 1;
    for (int i = 0; i < cells; ++i) combos *= 3;

    for (int code = 0; code < combos; ++code) {
      int rest = code;
      std::vector<std::int64_t> x(length), y(length);
      for (int i = 0; i < length; ++i) {
        x[i] = rest % 3;
        rest /= 3;
        y[i] = rest % 3;
        rest /= 3;
      }

      for (ActivityPair pair : kAllPairs) {
        std::vector<std::int64_t> zeros(length, 0);
        const auto& first = x;
        const auto& second = y;
        std::vector<ActivityProfile> profiles(length);
        for (int i = 0; i < length; ++i) {
          profiles[i].ordinal = i;
          switch (pair) {
            case ActivityPair::AdaptiveCorrective:
              profiles[i].adaptive = first[i];
              profiles[i].corrective = second[i];
              break;
            case ActivityPair::AdaptivePerfective:
              profiles[i].adaptive = first[i];
              profiles[i].perfective = second[i];
              break;
            case ActivityPair::CorrectivePerfective:
              profiles[i].corrective = first[i];
              profiles[i].perfective = second[i];
              break;
          }
        }

        auto events = detect_crossovers(profiles, pair);
        size_t event_index = 0;
        for (int i = 1; i < length; ++i) {
          const std::int64_t before = first[i - 1] - second[i - 1];
          const std::int64_t after = first[i] - second[i];
          const bool expected = before * after < 0;
          const bool reported =
              event_index < events.size() && events[event_index].at_ordinal == i;
          REQUIRE(reported == expected);
          if (reported) ++event_index;
        }
        REQUIRE(event_index == events.size());
      }
    }
  }
}

TEST_CASE("maturity ratio is crossovers over releases") {
  auto profiles = make_profiles({2, 2, 2, 2}, {3, 1, 3, 1}, {0, 0, 0, 0});
  MaturityScore score = maturity_score(profiles);
  CHECK(score.adaptive_corrective == 3);
  CHECK(score.total_crossovers == 3);
  CHECK(score.release_count == 4);
  CHECK(score.maturity_ratio == doctest::Approx(0.75).epsilon(1e-12));

  CHECK(maturity_score({}).maturity_ratio == 0.0);
  CHECK(maturity_score({}).release_count == 0);
}

TEST_CASE("all_crossovers is sorted by ordinal then pair and matches per-pair runs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> value_dist(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ActivityProfile> profiles(12);
    for (int i = 0; i < 12; ++i) {
      profiles[i].ordinal = i;
      profiles[i].corrective = value_dist(rng);
      profiles[i].adaptive = value_dist(rng);
      profiles[i].perfective = value_dist(rng);
    }
    auto events = all_crossovers(profiles);
    size_t total = 0;
    for (ActivityPair pair : kAllPairs) total += detect_crossovers(profiles, pair).size();
    REQUIRE(events.size() == total);
    for (size_t i = 1; i < events.size(); ++i) {
      const bool ordered =
          events[i - 1].at_ordinal < events[i].at_ordinal ||
          (events[i - 1].at_ordinal == events[i].at_ordinal &&
           static_cast<int>(events[i - 1].pair) <= static_cast<int>(events[i].pair));
      REQUIRE(ordered);
    }
  }
}

TEST_CASE("reversal invariance: reading history backwards keeps every count") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> length_dist(2, 30);
  std::uniform_int_distribution<std::int64_t> value_dist(0, 20);
  for (int trial = 0; trial < 500; ++trial) {
    const int length = length_dist(rng);
    std::vector<std::int64_t> c(length), a(length), p(length);
    for (int i = 0; i < length; ++i) {
      c[i] = value_dist(rng);
      a[i] = value_dist(rng);
      p[i] = value_dist(rng);
    }
    auto forward = maturity_score(make_profiles(c, a, p));
    std::reverse(c.begin(), c.end());
    std::reverse(a.begin(), a.end());
    std::reverse(p.begin(), p.end());
    auto backward = maturity_score(make_profiles(c, a, p));
    REQUIRE(forward.adaptive_corrective == backward.adaptive_corrective);
    REQUIRE(forward.adaptive_perfective == backward.adaptive_perfective);
    REQUIRE(forward.corrective_perfective == backward.corrective_perfective);
    REQUIRE(forward.total_crossovers == backward.total_crossovers);
  }
}

TEST_CASE("positive scaling invariance: multiplying both series keeps every count") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> length_dist(2, 30);
  std::uniform_int_distribution<std::int64_t> value_dist(0, 20);
  std::uniform_int_distribution<std::int64_t> scale_dist(1, 9);
  for (int trial = 0; trial < 500; ++trial) {
    const int length = length_dist(rng);
    const std::int64_t k = scale_dist(rng);
    std::vector<std::int64_t> c(length), a(length), p(length);
    std::vector<std::int64_t> cs(length), as(length), ps(length);
    for (int i = 0; i < length; ++i) {
      c[i] = value_dist(rng);
      a[i] = value_dist(rng);
      p[i] = value_dist(rng);
      cs[i] = c[i] * k;
      as[i] = a[i] * k;
      ps[i] = p[i] * k;
    }
    auto plain = maturity_score(make_profiles(c, a, p));
    auto scaled = maturity_score(make_profiles(cs, as, ps));
    REQUIRE(plain.adaptive_corrective == scaled.adaptive_corrective);
    REQUIRE(plain.adaptive_perfective == scaled.adaptive_perfective);
    REQUIRE(plain.corrective_perfective == scaled.corrective_perfective);
  }
}

TEST_CASE("constructed 23-release history with exactly 21 crossovers") {
  // Adaptive alternates 3,1 around a constant corrective 2 for the first 22
  // releases (21 boundaries, every one a strict swap), then repeats the last
  // value so the 22nd boundary adds nothing. Perfective stays at 0 below both.
  std::vector<std::int64_t> c(23, 2), a(23), p(23, 0);
  for (int i = 0; i < 22; ++i) a[i] = (i % 2 == 0) ? 3 : 1;
  a[22] = a[21];
  auto score = maturity_score(make_profiles(c, a, p));
  CHECK(score.adaptive_corrective == 21);
  CHECK(score.adaptive_perfective == 0);
  CHECK(score.corrective_perfective == 0);
  CHECK(score.total_crossovers == 21);
  CHECK(score.release_count == 23);
  CHECK(round2(score.maturity_ratio) == doctest::Approx(0.91).epsilon(1e-12));
}
