#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "urlspread/posts.hpp"
#include "urlspread/rng.hpp"

using namespace urlspread;

TEST_CASE("urls are normalized on parse") {
  std::istringstream in(
      R"({"post_id":"1","community":"twitter","timestamp":1500000000,"urls":["HTTP://A.com/x#f"]})");
  const auto result = parse_posts(in);
  REQUIRE(result.posts.size() == 1);
  CHECK(result.diagnostics.empty());
  CHECK(result.posts[0].urls == std::vector<std::string>{"http://a.com/x"});
}

TEST_CASE("a non-JSON line becomes a diagnostic") {
  std::istringstream in("not json\n");
  const auto result = parse_posts(in);
  CHECK(result.posts.empty());
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].line == 1);
  CHECK(result.diagnostics[0].reason == "malformed JSON");
}

TEST_CASE("missing required keys skip the line, others survive") {
  std::ostringstream log;
  log << R"({"post_id":"1","community":"c","timestamp":10})" << "\n"
      << R"({"post_id":"2","community":"c","timestamp":11})" << "\n"
      << R"({"post_id":"3","community":"c"})" << "\n"
      << R"({"post_id":"4","community":"c","timestamp":12})" << "\n";
  std::istringstream in(log.str());
  const auto result = parse_posts(in);
  CHECK(result.posts.size() == 3);
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].line == 3);
  CHECK(result.diagnostics[0].reason == "missing key: timestamp");
}

TEST_CASE("field validation catches bad types and values") {
  std::ostringstream log;
  log << R"({"post_id":"1","community":"","timestamp":10})" << "\n"          // empty community
      << R"({"post_id":"2","community":"c","timestamp":-5})" << "\n"         // bad timestamp
      << R"({"post_id":"3","community":"c","timestamp":10,"urls":"x"})" << "\n"  // urls not a list
      << R"({"post_id":"4","community":"c","timestamp":10,"author_friends":-1})" << "\n";
  std::istringstream in(log.str());
  const auto result = parse_posts(in);
  CHECK(result.posts.empty());
  CHECK(result.diagnostics.size() == 4);
}

TEST_CASE("hashtags and mentions are normalized") {
  std::istringstream in(
      R"({"post_id":"1","community":"c","timestamp":10,"hashtags":["#MAGA","News"],"mentions":["@Alice","bob"]})");
  const auto result = parse_posts(in);
  REQUIRE(result.posts.size() == 1);
  CHECK(result.posts[0].hashtags == std::vector<std::string>{"maga", "news"});
  CHECK(result.posts[0].mentions == std::vector<std::string>{"Alice", "bob"});
}

TEST_CASE("optional profile fields parse when present") {
  std::istringstream in(
      R"({"post_id":"1","community":"c","timestamp":10,"author":"a1","language":"en","client":"web","author_followers":10,"author_friends":20,"author_description":"follow me","author_created":5})");
  const auto result = parse_posts(in);
  REQUIRE(result.posts.size() == 1);
  const auto& post = result.posts[0];
  CHECK(post.author == "a1");
  CHECK(post.language == "en");
  CHECK(post.client == "web");
  CHECK(post.author_followers == 10);
  CHECK(post.author_friends == 20);
  CHECK(post.author_description == "follow me");
  CHECK(post.author_created == 5);
}

TEST_CASE("url normalization rules") {
  CHECK(normalize_url("HTTP://A.com/x#f") == "http://a.com/x");
  CHECK(normalize_url("https://Host.Org/Path?Q=1#frag") == "https://host.org/Path?Q=1");
  CHECK(normalize_url("a.COM/Path") == "a.com/Path");
  CHECK(normalize_url("https://x.com") == "https://x.com");
  CHECK(normalize_url("") == "");
}

TEST_CASE("url normalization is idempotent on arbitrary inputs") {
  Xoshiro256pp rng(8);
  const std::string alphabet = "AbC://de.F/gH?i=J#kL:9";
  for (int rep = 0; rep < 500; ++rep) {
    std::string url;
    const std::size_t len = rng.next_below(24);
    for (std::size_t i = 0; i < len; ++i) url += alphabet[rng.next_below(alphabet.size())];
    const std::string once = normalize_url(url);
    CHECK(normalize_url(once) == once);
  }
}

TEST_CASE("host extraction strips scheme, port and www") {
  CHECK(url_host("http://a.com/x") == "a.com");
  CHECK(url_host("https://www.b.org:8080/y?q") == "b.org");
  CHECK(url_host("c.net/z") == "c.net");
  CHECK(url_host("") == "");
}

TEST_CASE("hashtag normalization strips one hash and lowercases") {
  CHECK(normalize_hashtag("#MAGA") == "maga");
  CHECK(normalize_hashtag("News") == "news");
  CHECK(normalize_hashtag("##x") == "#x");
}
