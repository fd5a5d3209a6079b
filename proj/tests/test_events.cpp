#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "urlspread/events.hpp"
#include "urlspread/posts.hpp"

using namespace urlspread;

namespace {

PostRecord post(std::string id, std::string community, std::int64_t ts,
                std::vector<std::string> urls) {
  PostRecord p;
  p.post_id = std::move(id);
  p.community = std::move(community);
  p.timestamp = ts;
  for (auto& u : urls) p.urls.push_back(normalize_url(u));
  return p;
}

const ObservationWindows kWide{{"reddit", {0.0, 1e6}}, {"gab", {0.0, 1e6}},
                               {"Reddit", {0.0, 1e6}}, {"The_Donald", {0.0, 1e6}}};

}  // namespace

TEST_CASE("per-community and per-url totals count events") {
  std::vector<PostRecord> posts = {
      post("1", "reddit", 3600, {"http://u.com/"}),
      post("2", "reddit", 7200, {"http://u.com/"}),
      post("3", "gab", 7200, {"http://u.com/"}),
      post("4", "gab", 9000, {"http://other.com/"}),
  };
  std::set<std::string> filter{"http://u.com/"};
  const auto table = extract_events(posts, filter, CommunityMap::identity(), kWide);
  CHECK(table.events.size() == 3);
  CHECK(table.by_community.at("reddit") == 2);
  CHECK(table.by_community.at("gab") == 1);
  CHECK(table.by_url.at("http://u.com/") == 3);
  CHECK(table.out_of_window == 0);
  CHECK(table.events[0].t == doctest::Approx(1.0));  // seconds -> hours
}

TEST_CASE("community map applies exact rules before wildcards") {
  const auto map = CommunityMap::from_json(
      R"({"reddit/The_Donald": "The_Donald", "reddit/*": "Reddit"})");
  CHECK(map.apply("reddit/The_Donald") == "The_Donald");
  CHECK(map.apply("reddit/politics") == "Reddit");
  CHECK(map.apply("reddit") == "Reddit");
  CHECK(map.apply("twitter") == "twitter");  // passthrough default

  std::vector<PostRecord> posts = {post("1", "reddit/The_Donald", 3600, {"http://u.com/"})};
  const auto table = extract_events(posts, std::nullopt, map, kWide);
  REQUIRE(table.events.size() == 1);
  CHECK(table.events[0].community == "The_Donald");
}

TEST_CASE("disabling passthrough makes the map total or an error") {
  auto map = CommunityMap::from_json(R"({"*": "strict", "x": "X"})");
  CHECK(map.apply("x") == "X");
  CHECK(!map.apply("y").has_value());
  std::vector<PostRecord> posts = {post("1", "y", 3600, {"http://u.com/"})};
  CHECK_THROWS_AS(extract_events(posts, std::nullopt, map, kWide), std::invalid_argument);
}

TEST_CASE("out-of-window events are tallied, not dropped silently") {
  ObservationWindows windows{{"gab", {10.0, 20.0}}};
  std::vector<PostRecord> posts = {
      post("1", "gab", 5 * 3600, {"http://u.com/"}),    // before the window
      post("2", "gab", 15 * 3600, {"http://u.com/"}),   // inside
      post("3", "gab", 25 * 3600, {"http://u.com/"}),   // after
  };
  const auto table = extract_events(posts, std::nullopt, CommunityMap::identity(), windows);
  CHECK(table.events.size() == 1);
  CHECK(table.out_of_window == 2);
}

TEST_CASE("duplicate urls within one post yield one event") {
  std::vector<PostRecord> posts = {
      post("1", "gab", 3600, {"http://u.com/", "HTTP://U.com/", "http://v.com/"})};
  const auto table = extract_events(posts, std::nullopt, CommunityMap::identity(), kWide);
  CHECK(table.events.size() == 2);
  CHECK(table.by_url.at("http://u.com/") == 1);
}

TEST_CASE("conservation: cascade sizes plus tally cover all filtered urls") {
  Xoshiro256pp rng(1);
  ObservationWindows windows{{"reddit", {100.0, 400.0}}, {"gab", {50.0, 300.0}}};
  std::vector<std::string> url_pool = {"http://a.com/", "http://b.com/", "http://c.com/"};
  std::vector<PostRecord> posts;
  std::size_t filtered_pairs = 0;
  std::set<std::string> filter{"http://a.com/", "http://b.com/"};
  for (int i = 0; i < 300; ++i) {
    const std::string community = rng.next_below(2) ? "reddit" : "gab";
    const auto ts = static_cast<std::int64_t>(test::uniform(rng, 1.0, 500.0) * 3600.0);
    std::vector<std::string> urls;
    const std::size_t count = rng.next_below(3);
    for (std::size_t u = 0; u < count; ++u) urls.push_back(url_pool[rng.next_below(3)]);
    auto p = post(std::to_string(i), community, ts, urls);
    std::set<std::string> distinct(p.urls.begin(), p.urls.end());
    for (const auto& u : distinct) filtered_pairs += filter.count(u);
    posts.push_back(std::move(p));
  }
  const auto table = extract_events(posts, filter, CommunityMap::identity(), windows);
  const auto cascades = build_cascades(table, windows);
  std::size_t in_cascades = 0;
  for (const auto& cascade : cascades) in_cascades += cascade.events.size();
  CHECK(in_cascades + table.out_of_window == filtered_pairs);
  CHECK(in_cascades == table.events.size());
}

TEST_CASE("cascades sort by time with deterministic tie order") {
  ObservationWindows windows{{"A", {0.0, 10.0}}, {"B", {0.0, 10.0}}};
  std::vector<Event> events = {
      {"u", "A", 1.0}, {"u", "B", 0.5}, {"v", "A", 2.0}, {"u", "B", 1.0}};
  const auto table = make_event_table(events, windows);
  const auto cascades = build_cascades(table, windows);
  REQUIRE(cascades.size() == 2);
  CHECK(cascades[0].url_id == "u");
  REQUIRE(cascades[0].events.size() == 3);
  CHECK(cascades[0].events[0].community == "B");
  CHECK(cascades[0].events[0].t == 0.5);
  // Tie at t=1.0 resolves by community label: A before B.
  CHECK(cascades[0].events[1].community == "A");
  CHECK(cascades[0].events[2].community == "B");
  CHECK(cascades[1].url_id == "v");
}

TEST_CASE("zero events produce zero cascades") {
  const auto table = make_event_table({}, kWide);
  CHECK(build_cascades(table, kWide).empty());
}

TEST_CASE("events csv round-trips and is byte-stable") {
  std::vector<Event> events = {
      {"http://u.com/a?b=1", "twitter", 1.25},
      {"http://u.com/a,with,commas", "gab", 2.0},
      {"quoted\"url", "reddit", 3.091234},
  };
  const std::string csv = events_to_csv(events);
  const auto back = events_from_csv(csv);
  REQUIRE(back.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(back[i].url_id == events[i].url_id);
    CHECK(back[i].community == events[i].community);
    CHECK(back[i].t == doctest::Approx(events[i].t).epsilon(1e-9));
  }
  CHECK(events_to_csv(back) == csv);
  CHECK(csv.substr(0, csv.find('\n')) == "url_id,community,t_hours");
}

TEST_CASE("events csv rejects malformed rows") {
  CHECK_THROWS(events_from_csv("url_id,community\n"));
  CHECK_THROWS(events_from_csv("url_id,community,t_hours\nu,a,notanumber\n"));
  CHECK_THROWS(events_from_csv("url_id,community,t_hours\nu,a\n"));
  CHECK_THROWS(events_from_csv(""));
}

TEST_CASE("windows json round-trips and validates") {
  ObservationWindows windows{{"A", {0.0, 10.5}}, {"B", {5.0, 7.25}}};
  const auto text = windows_to_json(windows);
  CHECK(windows_from_json(text) == windows);
  CHECK_THROWS_AS(windows_from_json(R"({"A": {"start_hours": 5, "end_hours": 5}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(windows_from_json(R"({"A": {"start_hours": 5}})"), std::invalid_argument);
}

TEST_CASE("pipeline output is identical across repeated runs") {
  const std::string log =
      R"({"post_id":"1","community":"gab","timestamp":360000,"urls":["http://u.com/","http://v.com/"]})"
      "\n"
      R"({"post_id":"2","community":"reddit","timestamp":360000,"urls":["http://u.com/"]})"
      "\n";
  auto run = [&] {
    std::istringstream in(log);
    const auto parsed = parse_posts(in);
    const auto table = extract_events(parsed.posts, std::nullopt, CommunityMap::identity(), kWide);
    const auto cascades = build_cascades(table, kWide);
    std::string serialized;
    for (const auto& cascade : cascades) serialized += events_to_csv(cascade.events);
    return serialized;
  };
  CHECK(run() == run());
}
