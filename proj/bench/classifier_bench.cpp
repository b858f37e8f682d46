// Compares the parallel release-profiling kernel against its serial reference
// on synthetic windows. Run: build/bench/classifier_bench
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ossrecon/classifier.hpp"

namespace {

using namespace ossrecon;

std::vector<ReleaseWindow> synthetic_windows(int window_count, int commits_per_window) {
  static const std::vector<std::string> subjects = {
      "fix crash in parser on empty input",
      "add support for nested config sections",
      "refactor scheduler internals for clarity",
      "bug in retry loop leaves socket open",
      "implement incremental index updates",
      "clean up logging in worker pool",
      "merge branch release into main",
      "upgrade runtime image to latest LTS",
      "documentation pass over public headers",
      "weekly dependency bump",
  };
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<size_t> pick(0, subjects.size() - 1);

  std::vector<ReleaseWindow> windows(window_count);
  for (int w = 0; w < window_count; ++w) {
    windows[w].ordinal = w;
    windows[w].tag_name = "v" + std::to_string(w);
    for (int c = 0; c < commits_per_window; ++c) {
      Commit commit;
      commit.hash = std::to_string(w) + ":" + std::to_string(c);
      commit.message = subjects[pick(rng)];
      windows[w].commits.push_back(std::move(commit));
    }
  }
  return windows;
}

void BM_ProfileReleasesSerial(benchmark::State& state) {
  const auto windows = synthetic_windows(static_cast<int>(state.range(0)), 400);
  const KeywordTable& table = default_keyword_table();
  for (auto _ : state) {
    auto profiles = profile_releases_serial(windows, table);
    benchmark::DoNotOptimize(profiles);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 400);
}

void BM_ProfileReleasesParallel(benchmark::State& state) {
  const auto windows = synthetic_windows(static_cast<int>(state.range(0)), 400);
  const KeywordTable& table = default_keyword_table();
  for (auto _ : state) {
    auto profiles = profile_releases(windows, table);
    benchmark::DoNotOptimize(profiles);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 400);
}

}  // namespace

BENCHMARK(BM_ProfileReleasesSerial)->Arg(8)->Arg(64)->Arg(256);
BENCHMARK(BM_ProfileReleasesParallel)->Arg(8)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
