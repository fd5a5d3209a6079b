#ifndef URLSPREAD_CORPUS_STATS_HPP
#define URLSPREAD_CORPUS_STATS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "urlspread/posts.hpp"

namespace urlspread {

// Descriptive analytics over post logs. Everything here is pure and
// order-insensitive: shuffling the input posts changes no output. All
// bucketing is UTC; weeks are anchored at Monday 00:00 UTC and weekly series
// are zero-filled so buckets are contiguous over each group's span.

struct TimeSeries {
  std::string group;   // community label, empty for single-group results
  std::string bucket;  // "week" | "hour-of-day" | "hour-of-week"
  // (bucket key, value); key is the week's Monday 00:00 in Unix seconds for
  // weekly buckets, the hour index otherwise. Keys strictly increasing.
  std::vector<std::pair<std::int64_t, double>> points;
};

enum class ProfileMode {
  weekly,             // posts per week
  creation_weekly,    // accounts by creation week (requires author_created)
  hour_of_day,        // posts per UTC hour, 0..23
  hour_of_week,       // posts per UTC hour of week, 0 = Monday 00:00
  first_post_weekly,  // accounts by week of their first post
  last_post_weekly,   // accounts by week of their last post
};

// One series per community. With normalized set, weekly counts are scaled to
// each group's own maximum (peak = 1); the choice of normalization constant
// is this one and callers surface it in output metadata.
std::vector<TimeSeries> temporal_profiles(const std::vector<PostRecord>& posts,
                                          ProfileMode mode, bool normalized = false);

struct ActiveShare {
  TimeSeries series;               // percent of roster posting, per week
  std::size_t outside_roster = 0;  // posts by authors not in the roster
};

// Percent of roster accounts that posted in each week of the span. Throws
// std::invalid_argument on an empty roster.
ActiveShare active_share_per_week(const std::vector<PostRecord>& posts,
                                  const std::set<std::string>& roster);

// Weekly count of posts mentioning at least one roster handle
// (case-insensitive); a post counts once no matter how many roster handles
// it mentions.
TimeSeries intra_group_mentions(const std::vector<PostRecord>& posts,
                                const std::set<std::string>& roster);

enum class AccountAttribute { language, client };

struct DiversityCdf {
  std::vector<std::size_t> counts;            // distinct values per account, ascending
  std::vector<std::pair<int, double>> cdf;    // (c, share of accounts with count <= c)
  std::size_t skipped_posts = 0;              // posts with the attribute empty
};

// Distribution of how many distinct languages/clients each account used.
DiversityCdf diversity_cdf(const std::vector<PostRecord>& posts, AccountAttribute attribute);

enum class ShareNormalization {
  per_week,   // value share of each week's posts; values outside the top n
              // merge into "other", so each week sums to 100
  per_value,  // week's share of each value's overall posts
};

std::vector<TimeSeries> share_over_time(const std::vector<PostRecord>& posts,
                                        AccountAttribute attribute, std::size_t top_n,
                                        ShareNormalization normalization);

struct RankedTable {
  struct Row {
    std::string term;
    std::size_t count = 0;  // posts (or accounts) containing the term
    double percent = 0.0;   // 100 * count / denominator
  };
  std::vector<Row> rows;           // count-descending, ties broken by term
  std::string denominator_desc;    // what percent is measured against
  std::size_t denominator = 0;
};

enum class TermSource {
  hashtags,
  domains,     // registered host of each URL, "www." stripped
  subreddits,  // community label after the first '/', e.g. "reddit/funny" -> "funny"
  description_words,
  description_bigrams,
};

struct TermFilters {
  bool ascii_letters_only = false;  // keep only [a-z]+ terms (the "English" filter)
  // Tokens dropped before unigram/bigram counting in description modes;
  // nullptr selects the vendored default list.
  const std::set<std::string>* stopwords = nullptr;
};

// Top-k terms by presence count. Hashtag/domain/subreddit modes count posts
// and use the post count as the percent denominator; description modes count
// accounts (one description per account, taken from its latest post carrying
// one) against the number of accounts with descriptions.
RankedTable top_terms(const std::vector<PostRecord>& posts, TermSource source, std::size_t k,
                      const TermFilters& filters = {});

struct DifferentialConfig {
  double split_hours = 0.0;       // boundary, hours since epoch
  std::size_t k = 10;
  std::size_t min_support = 20;   // minimum total posts containing the term
  double epsilon_per_day = 1.0;   // smoothing added to the after-rate
};

struct DifferentialRanking {
  RankedTable before_heavy;
  RankedTable after_heavy;
  std::vector<double> before_scores;  // aligned with before_heavy.rows
  std::vector<double> after_scores;   // aligned with after_heavy.rows
};

// Hashtags whose daily posting rate changed most across the split:
// score = (before_rate) / (after_rate + epsilon). Throws
// std::invalid_argument when the split leaves either side empty.
DifferentialRanking differential_ranking(const std::vector<PostRecord>& posts,
                                         const DifferentialConfig& config);

struct FollowerFriendStats {
  std::vector<std::pair<std::int64_t, double>> followers_cdf;  // (value, share <= value)
  std::vector<std::pair<std::int64_t, double>> friends_cdf;
  double median_ratio = 0.0;      // followers/friends across accounts
  std::size_t ratio_accounts = 0;
  std::size_t zero_friends = 0;   // excluded from the ratio, tallied
};

// Per-community follower/friend distributions; each account's values come
// from its latest post carrying them. The median uses the midpoint of the
// two central values on even counts. Groups with no account carrying both
// fields are dropped; throws std::runtime_error when none remain.
std::map<std::string, FollowerFriendStats> follower_friend_summary(
    const std::vector<PostRecord>& posts);

// The vendored stopword list: function words only, versioned with the repo
// so description tables are reproducible bit-for-bit.
const std::set<std::string>& default_stopwords();

// Lowercases ASCII, treats ASCII punctuation as separators (bytes >= 0x80
// pass through, so UTF-8 text survives), drops stopwords.
std::vector<std::string> tokenize_description(const std::string& text,
                                              const std::set<std::string>& stopwords);

}  // namespace urlspread

#endif
