#include <benchmark/benchmark.h>

#include "urlspread/corpus_stats.hpp"
#include "urlspread/rng.hpp"
#include "urlspread/time_buckets.hpp"

using namespace urlspread;

namespace {

std::vector<PostRecord> synthetic_posts(std::size_t n) {
  Xoshiro256pp rng(99);
  const std::vector<std::string> langs = {"en", "ru", "de", "fr"};
  const std::vector<std::string> tags = {"maga", "news", "sports", "politics"};
  std::vector<PostRecord> posts;
  posts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PostRecord p;
    p.post_id = "p" + std::to_string(i);
    p.community = "twitter";
    p.author = "acct" + std::to_string(rng.next_below(500));
    p.timestamp = 1451865600 + static_cast<std::int64_t>(rng.next_below(100 * kSecondsPerWeek));
    p.language = langs[rng.next_below(langs.size())];
    p.hashtags.push_back(tags[rng.next_below(tags.size())]);
    posts.push_back(std::move(p));
  }
  return posts;
}

void BM_WeeklyProfile(benchmark::State& state) {
  const auto posts = synthetic_posts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto series = temporal_profiles(posts, ProfileMode::weekly);
    benchmark::DoNotOptimize(series);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeeklyProfile)->RangeMultiplier(8)->Range(1000, 512000);

void BM_TopHashtags(benchmark::State& state) {
  const auto posts = synthetic_posts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto table = top_terms(posts, TermSource::hashtags, 20);
    benchmark::DoNotOptimize(table);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TopHashtags)->RangeMultiplier(8)->Range(1000, 512000);

void BM_ShareOverTime(benchmark::State& state) {
  const auto posts = synthetic_posts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto series = share_over_time(posts, AccountAttribute::language, 4,
                                  ShareNormalization::per_week);
    benchmark::DoNotOptimize(series);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShareOverTime)->RangeMultiplier(8)->Range(1000, 512000);

}  // namespace

BENCHMARK_MAIN();
