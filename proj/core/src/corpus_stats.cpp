#include "urlspread/corpus_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urlspread/time_buckets.hpp"

namespace urlspread {

namespace {

constexpr double kSecondsPerHourD = 3600.0;

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Zero-fills weekly counts so buckets are contiguous over [first, last].
TimeSeries weekly_series(const std::map<std::int64_t, double>& counts, std::string group) {
  TimeSeries series;
  series.group = std::move(group);
  series.bucket = "week";
  if (counts.empty()) return series;
  const std::int64_t first = counts.begin()->first;
  const std::int64_t last = counts.rbegin()->first;
  for (std::int64_t week = first; week <= last; week += kSecondsPerWeek) {
    auto it = counts.find(week);
    series.points.emplace_back(week, it == counts.end() ? 0.0 : it->second);
  }
  return series;
}

TimeSeries hour_series(const std::map<int, double>& counts, int buckets, std::string group,
                       std::string bucket_name) {
  TimeSeries series;
  series.group = std::move(group);
  series.bucket = std::move(bucket_name);
  for (int h = 0; h < buckets; ++h) {
    auto it = counts.find(h);
    series.points.emplace_back(h, it == counts.end() ? 0.0 : it->second);
  }
  return series;
}

// Deterministic "latest post carrying a field" rule: max (timestamp,
// post_id), so results do not depend on input order.
struct LatestPick {
  std::int64_t timestamp = 0;
  const std::string* post_id = nullptr;

  bool beats(const PostRecord& post) const {
    if (post_id == nullptr) return false;
    if (timestamp != post.timestamp) return timestamp > post.timestamp;
    return *post_id >= post.post_id;
  }
};

std::vector<std::pair<std::int64_t, double>> cdf_points(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::pair<std::int64_t, double>> points;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    points.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  return points;
}

const std::string& attribute_of(const PostRecord& post, AccountAttribute attribute) {
  return attribute == AccountAttribute::language ? post.language : post.client;
}

bool ascii_letters_only(const std::string& term) {
  if (term.empty()) return false;
  for (char c : term)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
  return true;
}

std::string subreddit_of(const std::string& community) {
  auto slash = community.find('/');
  if (slash == std::string::npos || slash + 1 >= community.size()) return community;
  return community.substr(slash + 1);
}

RankedTable ranked_from_counts(const std::map<std::string, std::size_t>& counts,
                               std::size_t k, std::size_t denominator,
                               std::string denominator_desc) {
  std::vector<RankedTable::Row> rows;
  rows.reserve(counts.size());
  for (const auto& [term, count] : counts) {
    double percent = denominator == 0 ? 0.0
                                      : 100.0 * static_cast<double>(count) /
                                            static_cast<double>(denominator);
    rows.push_back({term, count, percent});
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.term < b.term;
  });
  if (rows.size() > k) rows.resize(k);
  RankedTable table;
  table.rows = std::move(rows);
  table.denominator = denominator;
  table.denominator_desc = std::move(denominator_desc);
  return table;
}

// Presence counts of hashtags per post; shared by top_terms and
// differential_ranking.
std::set<std::string> post_hashtags(const PostRecord& post, bool ascii_only) {
  std::set<std::string> tags;
  for (const auto& tag : post.hashtags) {
    if (tag.empty()) continue;
    if (ascii_only && !ascii_letters_only(tag)) continue;
    tags.insert(tag);
  }
  return tags;
}

}  // namespace

std::vector<TimeSeries> temporal_profiles(const std::vector<PostRecord>& posts,
                                          ProfileMode mode, bool normalized) {
  // Group key is the community label.
  std::map<std::string, std::map<std::int64_t, double>> weekly;
  std::map<std::string, std::map<int, double>> hourly;

  struct AccountState {
    std::int64_t first = 0;
    std::int64_t last = 0;
    bool seen = false;
    LatestPick created_pick;
    std::int64_t created = 0;
    bool has_created = false;
  };
  std::map<std::string, std::map<std::string, AccountState>> accounts;

  for (const auto& post : posts) {
    switch (mode) {
      case ProfileMode::weekly:
        weekly[post.community][week_start(post.timestamp)] += 1.0;
        break;
      case ProfileMode::hour_of_day:
        hourly[post.community][hour_of_day(post.timestamp)] += 1.0;
        break;
      case ProfileMode::hour_of_week:
        hourly[post.community][hour_of_week(post.timestamp)] += 1.0;
        break;
      case ProfileMode::creation_weekly:
      case ProfileMode::first_post_weekly:
      case ProfileMode::last_post_weekly: {
        if (post.author.empty()) break;
        AccountState& state = accounts[post.community][post.author];
        if (!state.seen) {
          state.first = state.last = post.timestamp;
          state.seen = true;
        } else {
          state.first = std::min(state.first, post.timestamp);
          state.last = std::max(state.last, post.timestamp);
        }
        if (post.author_created && !state.created_pick.beats(post)) {
          state.created_pick = {post.timestamp, &post.post_id};
          state.created = *post.author_created;
          state.has_created = true;
        }
        break;
      }
    }
  }

  for (const auto& [group, members] : accounts) {
    for (const auto& [author, state] : members) {
      switch (mode) {
        case ProfileMode::creation_weekly:
          if (state.has_created) weekly[group][week_start(state.created)] += 1.0;
          break;
        case ProfileMode::first_post_weekly:
          weekly[group][week_start(state.first)] += 1.0;
          break;
        case ProfileMode::last_post_weekly:
          weekly[group][week_start(state.last)] += 1.0;
          break;
        default:
          break;
      }
    }
  }

  std::vector<TimeSeries> result;
  if (mode == ProfileMode::hour_of_day || mode == ProfileMode::hour_of_week) {
    const int buckets = mode == ProfileMode::hour_of_day ? 24 : 168;
    const char* name = mode == ProfileMode::hour_of_day ? "hour-of-day" : "hour-of-week";
    for (const auto& [group, counts] : hourly)
      result.push_back(hour_series(counts, buckets, group, name));
    return result;
  }
  for (const auto& [group, counts] : weekly) {
    TimeSeries series = weekly_series(counts, group);
    if (normalized && mode == ProfileMode::weekly && !series.points.empty()) {
      double peak = 0.0;
      for (const auto& [key, value] : series.points) peak = std::max(peak, value);
      if (peak > 0.0)
        for (auto& [key, value] : series.points) value /= peak;
    }
    result.push_back(std::move(series));
  }
  return result;
}

ActiveShare active_share_per_week(const std::vector<PostRecord>& posts,
                                  const std::set<std::string>& roster) {
  if (roster.empty()) throw std::invalid_argument("active_share_per_week: empty roster");
  ActiveShare out;
  std::map<std::int64_t, std::set<std::string>> active;
  std::map<std::int64_t, double> span;  // marks every week seen in the data
  for (const auto& post : posts) {
    const std::int64_t week = week_start(post.timestamp);
    span[week];  // default 0
    if (!roster.count(post.author)) {
      ++out.outside_roster;
      continue;
    }
    active[week].insert(post.author);
  }
  std::map<std::int64_t, double> shares;
  for (const auto& [week, ignored] : span) {
    auto it = active.find(week);
    const double count = it == active.end() ? 0.0 : static_cast<double>(it->second.size());
    shares[week] = 100.0 * count / static_cast<double>(roster.size());
  }
  out.series = weekly_series(shares, "");
  return out;
}

TimeSeries intra_group_mentions(const std::vector<PostRecord>& posts,
                                const std::set<std::string>& roster) {
  std::set<std::string> handles;
  for (const auto& name : roster) handles.insert(lower_ascii(name));
  std::map<std::int64_t, double> counts;
  for (const auto& post : posts) {
    const std::int64_t week = week_start(post.timestamp);
    counts[week];  // keep the span contiguous even for mention-free weeks
    for (const auto& mention : post.mentions) {
      if (handles.count(lower_ascii(mention))) {
        counts[week] += 1.0;
        break;  // a post counts once
      }
    }
  }
  return weekly_series(counts, "");
}

DiversityCdf diversity_cdf(const std::vector<PostRecord>& posts, AccountAttribute attribute) {
  DiversityCdf out;
  std::map<std::string, std::set<std::string>> values_by_account;
  for (const auto& post : posts) {
    const std::string& value = attribute_of(post, attribute);
    if (value.empty()) {
      ++out.skipped_posts;
      continue;
    }
    if (post.author.empty()) continue;
    values_by_account[post.author].insert(value);
  }
  for (const auto& [author, values] : values_by_account) out.counts.push_back(values.size());
  std::sort(out.counts.begin(), out.counts.end());
  if (out.counts.empty()) return out;
  const double n = static_cast<double>(out.counts.size());
  const std::size_t max_count = out.counts.back();
  std::size_t covered = 0;
  for (std::size_t c = 1; c <= max_count; ++c) {
    while (covered < out.counts.size() && out.counts[covered] <= c) ++covered;
    out.cdf.emplace_back(static_cast<int>(c), static_cast<double>(covered) / n);
  }
  return out;
}

std::vector<TimeSeries> share_over_time(const std::vector<PostRecord>& posts,
                                        AccountAttribute attribute, std::size_t top_n,
                                        ShareNormalization normalization) {
  if (top_n == 0) throw std::invalid_argument("share_over_time: top_n must be >= 1");
  std::map<std::string, std::map<std::int64_t, double>> counts;  // value -> week -> posts
  std::map<std::string, std::size_t> totals;
  std::map<std::int64_t, double> week_totals;
  for (const auto& post : posts) {
    const std::string& value = attribute_of(post, attribute);
    if (value.empty()) continue;
    const std::int64_t week = week_start(post.timestamp);
    counts[value][week] += 1.0;
    ++totals[value];
    week_totals[week] += 1.0;
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(totals.begin(), totals.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::set<std::string> top;
  for (std::size_t i = 0; i < ranked.size() && i < top_n; ++i) top.insert(ranked[i].first);

  std::vector<TimeSeries> result;
  if (normalization == ShareNormalization::per_week) {
    std::map<std::string, std::map<std::int64_t, double>> merged;
    for (const auto& [value, weeks] : counts) {
      const std::string key = top.count(value) ? value : "other";
      for (const auto& [week, count] : weeks) merged[key][week] += count;
    }
    for (const auto& [value, weeks] : merged) {
      std::map<std::int64_t, double> shares;
      for (const auto& [week, total] : week_totals) {
        auto it = weeks.find(week);
        shares[week] = 100.0 * (it == weeks.end() ? 0.0 : it->second) / total;
      }
      TimeSeries series = weekly_series(shares, value);
      result.push_back(std::move(series));
    }
    return result;
  }

  for (const auto& [value, total] : ranked) {
    if (!top.count(value)) continue;
    std::map<std::int64_t, double> shares;
    for (const auto& [week, ignored] : week_totals) shares[week] = 0.0;
    for (const auto& [week, count] : counts[value])
      shares[week] = 100.0 * count / static_cast<double>(total);
    result.push_back(weekly_series(shares, value));
  }
  // Deterministic output order: by value label.
  std::sort(result.begin(), result.end(),
            [](const TimeSeries& a, const TimeSeries& b) { return a.group < b.group; });
  return result;
}

std::vector<std::string> tokenize_description(const std::string& text,
                                              const std::set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !stopwords.count(current)) tokens.push_back(current);
    current.clear();
  };
  for (unsigned char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      current += static_cast<char>(c);
    } else if (c >= 'A' && c <= 'Z') {
      current += static_cast<char>(c - 'A' + 'a');
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

RankedTable top_terms(const std::vector<PostRecord>& posts, TermSource source, std::size_t k,
                      const TermFilters& filters) {
  if (k == 0) throw std::invalid_argument("top_terms: k must be >= 1");
  const std::set<std::string>& stopwords =
      filters.stopwords ? *filters.stopwords : default_stopwords();
  std::map<std::string, std::size_t> counts;

  if (source == TermSource::description_words || source == TermSource::description_bigrams) {
    // One description per account: its latest post carrying one.
    std::map<std::string, std::pair<LatestPick, const std::string*>> descriptions;
    for (const auto& post : posts) {
      if (!post.author_description || post.author.empty()) continue;
      auto& slot = descriptions[post.author];
      if (!slot.first.beats(post)) {
        slot.first = {post.timestamp, &post.post_id};
        slot.second = &*post.author_description;
      }
    }
    for (const auto& [author, slot] : descriptions) {
      const auto tokens = tokenize_description(*slot.second, stopwords);
      std::set<std::string> terms;
      if (source == TermSource::description_words) {
        for (const auto& token : tokens)
          if (!filters.ascii_letters_only || ascii_letters_only(token)) terms.insert(token);
      } else {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
          terms.insert(tokens[i] + " " + tokens[i + 1]);
      }
      for (const auto& term : terms) ++counts[term];
    }
    return ranked_from_counts(counts, k, descriptions.size(), "accounts with descriptions");
  }

  for (const auto& post : posts) {
    std::set<std::string> terms;
    switch (source) {
      case TermSource::hashtags:
        terms = post_hashtags(post, filters.ascii_letters_only);
        break;
      case TermSource::domains:
        for (const auto& url : post.urls) {
          const std::string host = url_host(url);
          if (!host.empty()) terms.insert(host);
        }
        break;
      case TermSource::subreddits:
        terms.insert(subreddit_of(post.community));
        break;
      default:
        break;
    }
    for (const auto& term : terms) ++counts[term];
  }
  return ranked_from_counts(counts, k, posts.size(), "posts");
}

DifferentialRanking differential_ranking(const std::vector<PostRecord>& posts,
                                         const DifferentialConfig& config) {
  if (config.k == 0) throw std::invalid_argument("differential_ranking: k must be >= 1");
  if (posts.empty()) throw std::invalid_argument("differential_ranking: no posts");
  double min_hours = posts.front().timestamp / kSecondsPerHourD;
  double max_hours = min_hours;
  for (const auto& post : posts) {
    const double h = post.timestamp / kSecondsPerHourD;
    min_hours = std::min(min_hours, h);
    max_hours = std::max(max_hours, h);
  }
  const double days_before = (config.split_hours - min_hours) / 24.0;
  const double days_after = (max_hours - config.split_hours) / 24.0;
  if (days_before <= 0.0 || days_after <= 0.0)
    throw std::invalid_argument("differential_ranking: split leaves one side empty");

  struct Split {
    std::size_t before = 0;
    std::size_t after = 0;
  };
  std::map<std::string, Split> counts;
  for (const auto& post : posts) {
    const bool before = post.timestamp / kSecondsPerHourD < config.split_hours;
    for (const auto& tag : post_hashtags(post, false)) {
      if (before)
        ++counts[tag].before;
      else
        ++counts[tag].after;
    }
  }

  struct Scored {
    std::string term;
    std::size_t total;
    double score;
  };
  std::vector<Scored> scored;
  for (const auto& [term, split] : counts) {
    const std::size_t total = split.before + split.after;
    if (total < config.min_support) continue;
    const double before_rate = static_cast<double>(split.before) / days_before;
    const double after_rate = static_cast<double>(split.after) / days_after;
    scored.push_back({term, total, before_rate / (after_rate + config.epsilon_per_day)});
  }

  auto build = [&](bool before_heavy) {
    std::vector<Scored> order = scored;
    std::sort(order.begin(), order.end(), [&](const Scored& a, const Scored& b) {
      if (a.score != b.score) return before_heavy ? a.score > b.score : a.score < b.score;
      return a.term < b.term;
    });
    if (order.size() > config.k) order.resize(config.k);
    RankedTable table;
    table.denominator = posts.size();
    table.denominator_desc = "posts";
    std::vector<double> scores;
    for (const auto& item : order) {
      table.rows.push_back({item.term, item.total,
                            100.0 * static_cast<double>(item.total) /
                                static_cast<double>(posts.size())});
      scores.push_back(item.score);
    }
    return std::make_pair(std::move(table), std::move(scores));
  };

  DifferentialRanking result;
  std::tie(result.before_heavy, result.before_scores) = build(true);
  std::tie(result.after_heavy, result.after_scores) = build(false);
  return result;
}

std::map<std::string, FollowerFriendStats> follower_friend_summary(
    const std::vector<PostRecord>& posts) {
  struct AccountValues {
    LatestPick followers_pick, friends_pick;
    std::int64_t followers = 0, friends = 0;
    bool has_followers = false, has_friends = false;
  };
  std::map<std::string, std::map<std::string, AccountValues>> groups;
  for (const auto& post : posts) {
    if (post.author.empty()) continue;
    AccountValues& account = groups[post.community][post.author];
    if (post.author_followers && !account.followers_pick.beats(post)) {
      account.followers_pick = {post.timestamp, &post.post_id};
      account.followers = *post.author_followers;
      account.has_followers = true;
    }
    if (post.author_friends && !account.friends_pick.beats(post)) {
      account.friends_pick = {post.timestamp, &post.post_id};
      account.friends = *post.author_friends;
      account.has_friends = true;
    }
  }

  std::map<std::string, FollowerFriendStats> result;
  for (const auto& [group, members] : groups) {
    FollowerFriendStats stats;
    std::vector<std::int64_t> followers, friends;
    std::vector<double> ratios;
    for (const auto& [author, account] : members) {
      if (account.has_followers) followers.push_back(account.followers);
      if (account.has_friends) friends.push_back(account.friends);
      if (account.has_followers && account.has_friends) {
        if (account.friends == 0) {
          ++stats.zero_friends;
        } else {
          ratios.push_back(static_cast<double>(account.followers) /
                           static_cast<double>(account.friends));
        }
      }
    }
    if (ratios.empty()) continue;
    std::sort(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    stats.median_ratio =
        n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    stats.ratio_accounts = n;
    stats.followers_cdf = cdf_points(std::move(followers));
    stats.friends_cdf = cdf_points(std::move(friends));
    result.emplace(group, std::move(stats));
  }
  if (result.empty())
    throw std::runtime_error("follower_friend_summary: no account carries both fields");
  return result;
}

}  // namespace urlspread
