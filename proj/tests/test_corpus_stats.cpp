#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "test_support.hpp"
#include "urlspread/corpus_stats.hpp"
#include "urlspread/time_buckets.hpp"

using namespace urlspread;
using namespace urlspread::test;

namespace {

// 2017-01-02 is a Monday; anchor fixtures to it so week arithmetic is easy.
constexpr std::int64_t kMonday = 1483315200;

PostRecord post(std::string id, std::string author, std::int64_t ts,
                std::string community = "g") {
  PostRecord p;
  p.post_id = std::move(id);
  p.community = std::move(community);
  p.author = std::move(author);
  p.timestamp = ts;
  return p;
}

std::vector<PostRecord> shuffled(std::vector<PostRecord> posts, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  for (std::size_t i = posts.size(); i > 1; --i)
    std::swap(posts[i - 1], posts[rng.next_below(i)]);
  return posts;
}

}  // namespace

TEST_CASE("week bucketing is Monday-anchored UTC") {
  CHECK(day_of_week(kMonday) == 0);
  CHECK(week_start(kMonday) == kMonday);
  CHECK(week_start(kMonday + 3 * kSecondsPerDay + 7200) == kMonday);
  CHECK(week_start(kMonday - 1) == kMonday - kSecondsPerWeek);
  // Tuesday 13:00 UTC lands in hour-of-week bucket 37.
  CHECK(hour_of_week(kMonday + kSecondsPerDay + 13 * 3600) == 37);
  CHECK(hour_of_day(kMonday + 13 * 3600 + 59) == 13);
  CHECK(iso_date(kMonday) == "2017-01-02");
}

TEST_CASE("weekly profile counts posts per week with zero fill") {
  std::vector<PostRecord> posts = {
      post("1", "a", kMonday + 3600),
      post("2", "b", kMonday + 7200),
      post("3", "a", kMonday + 2 * kSecondsPerWeek),
  };
  const auto series = temporal_profiles(posts, ProfileMode::weekly);
  REQUIRE(series.size() == 1);
  REQUIRE(series[0].points.size() == 3);
  CHECK(series[0].points[0] == std::pair<std::int64_t, double>{kMonday, 2.0});
  CHECK(series[0].points[1].second == 0.0);
  CHECK(series[0].points[2].second == 1.0);
}

TEST_CASE("normalized weekly profile peaks at one") {
  std::vector<PostRecord> posts = {
      post("1", "a", kMonday), post("2", "b", kMonday),
      post("3", "a", kMonday + kSecondsPerWeek),
  };
  const auto series = temporal_profiles(posts, ProfileMode::weekly, /*normalized=*/true);
  CHECK(series[0].points[0].second == doctest::Approx(1.0));
  CHECK(series[0].points[1].second == doctest::Approx(0.5));
}

TEST_CASE("first and last post profiles count each account once") {
  std::vector<PostRecord> posts = {
      post("1", "a", kMonday),
      post("2", "a", kMonday + 4 * kSecondsPerWeek),
      post("3", "a", kMonday + kSecondsPerWeek),
  };
  const auto first = temporal_profiles(posts, ProfileMode::first_post_weekly);
  const auto last = temporal_profiles(posts, ProfileMode::last_post_weekly);
  CHECK(first[0].points.front().second == 1.0);
  double first_total = 0.0, last_total = 0.0;
  for (const auto& [k, v] : first[0].points) first_total += v;
  for (const auto& [k, v] : last[0].points) last_total += v;
  CHECK(first_total == 1.0);
  CHECK(last_total == 1.0);
  CHECK(last[0].points.back().second == 1.0);
}

TEST_CASE("creation profile uses the latest post's creation field") {
  auto p1 = post("1", "a", kMonday);
  p1.author_created = kMonday;
  auto p2 = post("2", "a", kMonday + 100);
  p2.author_created = kMonday + kSecondsPerWeek;  // later post wins
  const auto series = temporal_profiles({p1, p2}, ProfileMode::creation_weekly);
  REQUIRE(series.size() == 1);
  REQUIRE(series[0].points.size() == 1);
  CHECK(series[0].points[0] ==
        std::pair<std::int64_t, double>{kMonday + kSecondsPerWeek, 1.0});
}

TEST_CASE("active share divides distinct posters by the roster size") {
  std::set<std::string> roster{"a", "b", "c", "d"};
  std::vector<PostRecord> posts = {
      post("1", "a", kMonday), post("2", "b", kMonday),
      post("3", "a", kMonday + kSecondsPerWeek),
      post("4", "a", kMonday + kSecondsPerWeek + 60),
      post("5", "z", kMonday + kSecondsPerWeek),  // outsider
  };
  const auto share = active_share_per_week(posts, roster);
  CHECK(share.outside_roster == 1);
  REQUIRE(share.series.points.size() == 2);
  CHECK(share.series.points[0].second == doctest::Approx(50.0));
  CHECK(share.series.points[1].second == doctest::Approx(25.0));
  CHECK_THROWS_AS(active_share_per_week(posts, {}), std::invalid_argument);
}

TEST_CASE("active share keeps empty weeks in the span") {
  std::set<std::string> roster{"a"};
  std::vector<PostRecord> posts = {post("1", "a", kMonday),
                                   post("2", "a", kMonday + 2 * kSecondsPerWeek)};
  const auto share = active_share_per_week(posts, roster);
  REQUIRE(share.series.points.size() == 3);
  CHECK(share.series.points[1].second == 0.0);
}

TEST_CASE("mention counting is per post against the roster") {
  std::set<std::string> roster{"Alice", "bob"};
  auto p1 = post("1", "x", kMonday);
  p1.mentions = {"alice", "ALICE", "bob"};  // one post, one count
  auto p2 = post("2", "x", kMonday);
  p2.mentions = {"outsider"};
  auto p3 = post("3", "x", kMonday + kSecondsPerWeek);
  const auto series = intra_group_mentions({p1, p2, p3}, roster);
  REQUIRE(series.points.size() == 2);
  CHECK(series.points[0].second == 1.0);
  CHECK(series.points[1].second == 0.0);
  CHECK(intra_group_mentions({p1}, {}).points[0].second == 0.0);
}

TEST_CASE("diversity cdf counts distinct values per account") {
  auto mk = [&](std::string id, std::string author, std::string lang) {
    auto p = post(std::move(id), std::move(author), kMonday);
    p.language = std::move(lang);
    return p;
  };
  std::vector<PostRecord> posts = {
      mk("1", "a", "en"), mk("2", "a", "ru"), mk("3", "a", "en"),
      mk("4", "b", "en"),
      mk("5", "c", "en"), mk("6", "c", "ru"), mk("7", "c", "de"), mk("8", "c", "fr"),
      mk("9", "c", ""),
  };
  const auto cdf = diversity_cdf(posts, AccountAttribute::language);
  CHECK(cdf.counts == std::vector<std::size_t>{1, 2, 4});
  CHECK(cdf.skipped_posts == 1);
  REQUIRE(cdf.cdf.size() == 4);
  CHECK(cdf.cdf[1].first == 2);
  CHECK(cdf.cdf[1].second == doctest::Approx(2.0 / 3.0));
  CHECK(cdf.cdf[3].second == doctest::Approx(1.0));
}

TEST_CASE("diversity cdf on empty attributes is empty plus a tally") {
  auto p = post("1", "a", kMonday);
  const auto cdf = diversity_cdf({p, p}, AccountAttribute::client);
  CHECK(cdf.counts.empty());
  CHECK(cdf.cdf.empty());
  CHECK(cdf.skipped_posts == 2);
}

TEST_CASE("per-week shares split each week and sum to 100") {
  auto mk = [&](std::string id, std::string lang, std::int64_t ts) {
    auto p = post(std::move(id), "a", ts);
    p.language = std::move(lang);
    return p;
  };
  std::vector<PostRecord> posts = {
      mk("1", "en", kMonday), mk("2", "en", kMonday), mk("3", "en", kMonday),
      mk("4", "ru", kMonday),
  };
  const auto series = share_over_time(posts, AccountAttribute::language, 4,
                                      ShareNormalization::per_week);
  REQUIRE(series.size() == 2);
  CHECK(series[0].group == "en");
  CHECK(series[0].points[0].second == doctest::Approx(75.0));
  CHECK(series[1].group == "ru");
  CHECK(series[1].points[0].second == doctest::Approx(25.0));
}

TEST_CASE("per-value shares divide by each value's total") {
  auto mk = [&](std::string id, std::int64_t ts) {
    auto p = post(std::move(id), "a", ts);
    p.language = "ru";
    return p;
  };
  std::vector<PostRecord> posts;
  for (int i = 0; i < 6; ++i) posts.push_back(mk(std::to_string(i), kMonday));
  for (int i = 6; i < 10; ++i)
    posts.push_back(mk(std::to_string(i), kMonday + kSecondsPerWeek));
  const auto series = share_over_time(posts, AccountAttribute::language, 1,
                                      ShareNormalization::per_value);
  REQUIRE(series.size() == 1);
  CHECK(series[0].points[0].second == doctest::Approx(60.0));
  CHECK(series[0].points[1].second == doctest::Approx(40.0));
}

TEST_CASE("per-week shares merge non-top values into other") {
  auto mk = [&](std::string id, std::string lang) {
    auto p = post(std::move(id), "a", kMonday);
    p.language = std::move(lang);
    return p;
  };
  std::vector<PostRecord> posts = {mk("1", "en"), mk("2", "en"), mk("3", "ru"), mk("4", "de")};
  const auto series =
      share_over_time(posts, AccountAttribute::language, 1, ShareNormalization::per_week);
  REQUIRE(series.size() == 2);
  CHECK(series[0].group == "en");
  CHECK(series[0].points[0].second == doctest::Approx(50.0));
  CHECK(series[1].group == "other");
  CHECK(series[1].points[0].second == doctest::Approx(50.0));
}

TEST_CASE("top description bigrams keep follow me ranked first") {
  auto mk = [&](std::string id, std::string author, std::string description) {
    auto p = post(std::move(id), std::move(author), kMonday);
    p.author_description = std::move(description);
    return p;
  };
  std::vector<PostRecord> posts = {mk("1", "a", "follow me now"), mk("2", "b", "follow me")};
  const auto table = top_terms(posts, TermSource::description_bigrams, 5);
  REQUIRE(!table.rows.empty());
  CHECK(table.rows[0].term == "follow me");
  CHECK(table.rows[0].count == 2);
  CHECK(table.denominator == 2);
  CHECK(table.rows[0].percent == doctest::Approx(100.0));
}

TEST_CASE("stopwords drop out of description unigrams") {
  auto mk = [&](std::string id, std::string author, std::string description) {
    auto p = post(std::move(id), std::move(author), kMonday);
    p.author_description = std::move(description);
    return p;
  };
  const auto table =
      top_terms({mk("1", "a", "the breaking news of the day")}, TermSource::description_words, 10);
  std::set<std::string> terms;
  for (const auto& row : table.rows) terms.insert(row.term);
  CHECK(terms.count("breaking"));
  CHECK(terms.count("news"));
  CHECK(terms.count("day"));
  CHECK(!terms.count("the"));
  CHECK(!terms.count("of"));
}

TEST_CASE("domain counting keys on normalized hosts") {
  auto p1 = post("1", "a", kMonday);
  p1.urls = {normalize_url("http://a.com/x"), normalize_url("https://A.com/y")};
  auto p2 = post("2", "b", kMonday);
  p2.urls = {normalize_url("http://b.org/z")};
  auto p3 = post("3", "c", kMonday);
  p3.urls = {normalize_url("http://a.com/other")};
  const auto table = top_terms({p1, p2, p3}, TermSource::domains, 10);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].term == "a.com");
  CHECK(table.rows[0].count == 2);
  CHECK(table.rows[1].term == "b.org");
  CHECK(table.rows[1].count == 1);
  CHECK(table.denominator == 3);
}

TEST_CASE("subreddit terms strip the platform prefix") {
  std::vector<PostRecord> posts = {post("1", "a", kMonday, "reddit/funny"),
                                   post("2", "b", kMonday, "reddit/funny"),
                                   post("3", "c", kMonday, "reddit/AskReddit")};
  const auto table = top_terms(posts, TermSource::subreddits, 10);
  CHECK(table.rows[0].term == "funny");
  CHECK(table.rows[0].count == 2);
  CHECK(table.rows[0].percent == doctest::Approx(100.0 * 2 / 3));
}

TEST_CASE("the ascii filter keeps letter-only hashtags") {
  auto p = post("1", "a", kMonday);
  p.hashtags = {"maga", "news2018", "выборы"};
  TermFilters filters;
  filters.ascii_letters_only = true;
  const auto table = top_terms({p}, TermSource::hashtags, 10, filters);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].term == "maga");
  const auto unfiltered = top_terms({p}, TermSource::hashtags, 10);
  CHECK(unfiltered.rows.size() == 3);
}

TEST_CASE("differential ranking orders by rate change") {
  std::vector<PostRecord> posts;
  auto add = [&](std::string tag, int count, std::int64_t ts) {
    for (int i = 0; i < count; ++i) {
      auto p = post("p" + tag + std::to_string(ts) + "_" + std::to_string(i), "a", ts);
      p.hashtags = {tag};
      posts.push_back(std::move(p));
    }
  };
  const std::int64_t split = kMonday + 2 * kSecondsPerWeek;
  add("h", 10, kMonday);
  add("h", 2, split + 2 * kSecondsPerWeek);
  add("g", 1, kMonday);
  add("g", 9, split + 2 * kSecondsPerWeek);
  // Pad the span so both sides are two weeks long.
  add("pad", 1, kMonday);
  add("pad", 1, split + 2 * kSecondsPerWeek);

  DifferentialConfig config;
  config.split_hours = static_cast<double>(split) / 3600.0;
  config.k = 5;
  config.min_support = 2;
  const auto ranking = differential_ranking(posts, config);
  REQUIRE(!ranking.before_heavy.rows.empty());
  CHECK(ranking.before_heavy.rows[0].term == "h");
  CHECK(ranking.after_heavy.rows[0].term == "g");
}

TEST_CASE("terms below the support threshold are absent") {
  std::vector<PostRecord> posts;
  for (int i = 0; i < 30; ++i) {
    auto p = post("a" + std::to_string(i), "a",
                  kMonday + (i % 2 == 0 ? 0 : 2 * kSecondsPerWeek));
    p.hashtags = {"big"};
    posts.push_back(std::move(p));
  }
  auto rare = post("r", "a", kMonday);
  rare.hashtags = {"rare"};
  posts.push_back(rare);

  DifferentialConfig config;
  config.split_hours = static_cast<double>(kMonday + kSecondsPerWeek) / 3600.0;
  config.min_support = 20;
  const auto ranking = differential_ranking(posts, config);
  for (const auto& row : ranking.before_heavy.rows) CHECK(row.term != "rare");
  for (const auto& row : ranking.after_heavy.rows) CHECK(row.term != "rare");
}

TEST_CASE("a one-sided split is rejected") {
  std::vector<PostRecord> posts = {post("1", "a", kMonday)};
  DifferentialConfig config;
  config.split_hours = static_cast<double>(kMonday) / 3600.0 - 24.0;
  CHECK_THROWS_AS(differential_ranking(posts, config), std::invalid_argument);
}

TEST_CASE("follower-friend summary medians use the midpoint rule") {
  auto mk = [&](std::string id, std::string author, std::int64_t followers,
                std::int64_t friends) {
    auto p = post(std::move(id), std::move(author), kMonday);
    p.author_followers = followers;
    p.author_friends = friends;
    return p;
  };
  SUBCASE("single account") {
    const auto groups = follower_friend_summary({mk("1", "a", 100, 200)});
    CHECK(groups.at("g").median_ratio == doctest::Approx(0.5));
  }
  SUBCASE("even count averages the central ratios") {
    const auto groups =
        follower_friend_summary({mk("1", "a", 20, 100), mk("2", "b", 80, 100)});
    CHECK(groups.at("g").median_ratio == doctest::Approx(0.5));
    CHECK(groups.at("g").ratio_accounts == 2);
  }
  SUBCASE("zero-friend accounts are excluded and tallied") {
    const auto groups =
        follower_friend_summary({mk("1", "a", 10, 0), mk("2", "b", 30, 60)});
    CHECK(groups.at("g").zero_friends == 1);
    CHECK(groups.at("g").median_ratio == doctest::Approx(0.5));
  }
  SUBCASE("latest post wins") {
    auto early = mk("1", "a", 10, 10);
    auto late = mk("2", "a", 100, 200);
    late.timestamp = kMonday + 100;
    const auto groups = follower_friend_summary({late, early});
    CHECK(groups.at("g").median_ratio == doctest::Approx(0.5));
  }
  SUBCASE("no qualifying account is an error") {
    auto p = post("1", "a", kMonday);
    CHECK_THROWS_AS(follower_friend_summary({p}), std::runtime_error);
  }
}

TEST_CASE("shuffling the input changes nothing") {
  Xoshiro256pp rng(1001);
  std::vector<PostRecord> posts;
  const std::vector<std::string> langs = {"en", "ru", "de", ""};
  const std::vector<std::string> tags = {"maga", "news", "i", "breaking"};
  for (int i = 0; i < 400; ++i) {
    auto p = post("p" + std::to_string(i), "acct" + std::to_string(rng.next_below(25)),
                  kMonday + static_cast<std::int64_t>(rng.next_below(10 * kSecondsPerWeek)));
    p.language = langs[rng.next_below(langs.size())];
    if (rng.next_below(2)) p.hashtags.push_back(tags[rng.next_below(tags.size())]);
    if (rng.next_below(3) == 0) {
      p.author_followers = static_cast<std::int64_t>(rng.next_below(1000));
      p.author_friends = static_cast<std::int64_t>(rng.next_below(1000));
    }
    posts.push_back(std::move(p));
  }
  auto mixed = shuffled(posts, 7);

  auto flatten = [](const std::vector<TimeSeries>& list) {
    std::vector<std::tuple<std::string, std::int64_t, double>> flat;
    for (const auto& s : list)
      for (const auto& [k, v] : s.points) flat.emplace_back(s.group, k, v);
    return flat;
  };
  CHECK(flatten(temporal_profiles(posts, ProfileMode::weekly)) ==
        flatten(temporal_profiles(mixed, ProfileMode::weekly)));
  CHECK(flatten(temporal_profiles(posts, ProfileMode::first_post_weekly)) ==
        flatten(temporal_profiles(mixed, ProfileMode::first_post_weekly)));
  CHECK(flatten(share_over_time(posts, AccountAttribute::language, 2,
                                ShareNormalization::per_week)) ==
        flatten(share_over_time(mixed, AccountAttribute::language, 2,
                                ShareNormalization::per_week)));

  const auto t1 = top_terms(posts, TermSource::hashtags, 3);
  const auto t2 = top_terms(mixed, TermSource::hashtags, 3);
  REQUIRE(t1.rows.size() == t2.rows.size());
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].term == t2.rows[i].term);
    CHECK(t1.rows[i].count == t2.rows[i].count);
  }

  const auto f1 = follower_friend_summary(posts);
  const auto f2 = follower_friend_summary(mixed);
  CHECK(f1.at("g").median_ratio == f2.at("g").median_ratio);
  CHECK(f1.at("g").followers_cdf == f2.at("g").followers_cdf);
}

TEST_CASE("weekly bucket counts match a naive per-post loop") {
  Xoshiro256pp rng(321);
  std::vector<PostRecord> posts;
  for (int i = 0; i < 1000; ++i)
    posts.push_back(post("p" + std::to_string(i), "a",
                         kMonday + static_cast<std::int64_t>(rng.next_below(40 * kSecondsPerWeek))));
  const auto series = temporal_profiles(posts, ProfileMode::weekly);
  std::map<std::int64_t, double> naive;
  for (const auto& p : posts) naive[week_start(p.timestamp)] += 1.0;
  double total = 0.0;
  for (const auto& [week, value] : series[0].points) {
    auto it = naive.find(week);
    CHECK(value == (it == naive.end() ? 0.0 : it->second));
    total += value;
  }
  CHECK(total == 1000.0);
}
