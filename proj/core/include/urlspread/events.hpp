#ifndef URLSPREAD_EVENTS_HPP
#define URLSPREAD_EVENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "urlspread/posts.hpp"

namespace urlspread {

// Per-community data-availability window, in hours since the Unix epoch.
struct Window {
  double start_hours = 0.0;
  double end_hours = 0.0;

  double length() const { return end_hours - start_hours; }
  bool contains(double t) const { return t >= start_hours && t <= end_hours; }
  bool operator==(const Window&) const = default;
};

// Keyed map keeps community iteration order deterministic (lexicographic).
using ObservationWindows = std::map<std::string, Window>;

std::string windows_to_json(const ObservationWindows& windows);
ObservationWindows windows_from_json(const std::string& text);  // throws on bad input

// One occurrence of a URL in a community, time in hours since epoch.
struct Event {
  std::string url_id;
  std::string community;
  double t = 0.0;

  bool operator==(const Event&) const = default;
};

// Maps raw community labels to analysis communities. Exact rules win over
// wildcard rules; a wildcard key "x/*" matches "x" and anything under "x/".
// With passthrough enabled, unmatched labels map to themselves.
struct CommunityMap {
  std::map<std::string, std::string> exact;
  std::vector<std::pair<std::string, std::string>> wildcards;  // (prefix, target)
  bool passthrough = true;

  std::optional<std::string> apply(const std::string& raw) const;

  static CommunityMap identity() { return {}; }
  // JSON object {raw_or_wildcard: analysis_community, ...}; optional key
  // "*" toggles passthrough ("*": "pass" keeps unmatched labels).
  static CommunityMap from_json(const std::string& text);
};

// All URL events extracted from a post log, plus the exact counts needed to
// audit the extraction.
struct EventTable {
  std::vector<Event> events;  // in-window events, input order
  std::map<std::string, std::size_t> by_community;
  std::map<std::string, std::size_t> by_url;
  std::size_t out_of_window = 0;  // excluded, tallied, never silently dropped
};

// One event per (post, distinct URL) pair passing the filter; repeated posts
// of the same URL are separate events, duplicates inside a single post are
// not. Post timestamps are converted seconds -> hours. Throws
// std::invalid_argument when a mapped community has no window or the map is
// not total with passthrough disabled.
EventTable extract_events(const std::vector<PostRecord>& posts,
                          const std::optional<std::set<std::string>>& url_filter,
                          const CommunityMap& community_map,
                          const ObservationWindows& windows);

// Rebuilds a table from bare events (e.g. read back from CSV); out-of-window
// events are tallied and excluded, exactly as in extract_events.
EventTable make_event_table(const std::vector<Event>& events,
                            const ObservationWindows& windows);

// Time-ordered events of one URL across all configured communities.
// Events are sorted by (t, community, input index); the windows map carries
// the full configured community set, not just communities present here.
struct Cascade {
  std::string url_id;
  std::vector<Event> events;
  ObservationWindows windows;

  std::map<std::string, std::size_t> counts_by_community() const;
};

// One cascade per distinct url_id, sorted by url_id. Throws when an event's
// community has no window.
std::vector<Cascade> build_cascades(const EventTable& table,
                                    const ObservationWindows& windows);

// CSV interchange: header "url_id,community,t_hours", t with 6 decimals,
// RFC4180-style quoting for fields containing commas/quotes/newlines.
void write_events_csv(std::ostream& out, const std::vector<Event>& events);
std::string events_to_csv(const std::vector<Event>& events);
std::vector<Event> read_events_csv(std::istream& in);  // throws on malformed rows
std::vector<Event> events_from_csv(const std::string& text);

}  // namespace urlspread

#endif
