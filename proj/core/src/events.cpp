#include "urlspread/events.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csv_util.hpp"

namespace urlspread {

namespace {

using nlohmann::json;

constexpr double kSecondsPerHour = 3600.0;

}  // namespace

std::string windows_to_json(const ObservationWindows& windows) {
  json obj = json::object();
  for (const auto& [community, w] : windows) {
    obj[community] = {{"start_hours", w.start_hours}, {"end_hours", w.end_hours}};
  }
  return obj.dump(2) + "\n";
}

ObservationWindows windows_from_json(const std::string& text) {
  json obj = json::parse(text);
  if (!obj.is_object()) throw std::invalid_argument("windows: expected a JSON object");
  ObservationWindows windows;
  for (const auto& [community, value] : obj.items()) {
    if (!value.is_object() || !value.contains("start_hours") || !value.contains("end_hours"))
      throw std::invalid_argument("windows: entry for '" + community +
                                  "' needs start_hours and end_hours");
    Window w{value["start_hours"].get<double>(), value["end_hours"].get<double>()};
    if (!(w.start_hours < w.end_hours))
      throw std::invalid_argument("windows: '" + community + "' has start >= end");
    windows.emplace(community, w);
  }
  return windows;
}

std::optional<std::string> CommunityMap::apply(const std::string& raw) const {
  if (auto it = exact.find(raw); it != exact.end()) return it->second;
  for (const auto& [prefix, target] : wildcards) {
    if (raw == prefix) return target;
    if (raw.size() > prefix.size() && raw.compare(0, prefix.size(), prefix) == 0 &&
        raw[prefix.size()] == '/')
      return target;
  }
  if (passthrough) return raw;
  return std::nullopt;
}

CommunityMap CommunityMap::from_json(const std::string& text) {
  json obj = json::parse(text);
  if (!obj.is_object()) throw std::invalid_argument("community map: expected a JSON object");
  CommunityMap map;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_string())
      throw std::invalid_argument("community map: value for '" + key + "' must be a string");
    if (key == "*") {
      map.passthrough = value.get<std::string>() == "pass";
      continue;
    }
    if (key.size() >= 2 && key.compare(key.size() - 2, 2, "/*") == 0) {
      map.wildcards.emplace_back(key.substr(0, key.size() - 2), value.get<std::string>());
    } else {
      map.exact.emplace(key, value.get<std::string>());
    }
  }
  // Longest prefix wins when wildcard rules nest.
  std::sort(map.wildcards.begin(), map.wildcards.end(),
            [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  return map;
}

EventTable extract_events(const std::vector<PostRecord>& posts,
                          const std::optional<std::set<std::string>>& url_filter,
                          const CommunityMap& community_map,
                          const ObservationWindows& windows) {
  EventTable table;
  std::vector<std::string> seen;  // distinct URLs within one post, first-occurrence order
  for (const auto& post : posts) {
    auto community = community_map.apply(post.community);
    if (!community)
      throw std::invalid_argument("community map does not cover '" + post.community + "'");
    auto window_it = windows.find(*community);
    if (window_it == windows.end())
      throw std::invalid_argument("community has no observation window: " + *community);

    seen.clear();
    for (const auto& url : post.urls) {
      if (std::find(seen.begin(), seen.end(), url) != seen.end()) continue;
      seen.push_back(url);
      if (url_filter && !url_filter->count(url)) continue;
      double t = static_cast<double>(post.timestamp) / kSecondsPerHour;
      if (!window_it->second.contains(t)) {
        ++table.out_of_window;
        continue;
      }
      table.events.push_back({url, *community, t});
      ++table.by_community[*community];
      ++table.by_url[url];
    }
  }
  return table;
}

EventTable make_event_table(const std::vector<Event>& events,
                            const ObservationWindows& windows) {
  EventTable table;
  for (const auto& ev : events) {
    auto it = windows.find(ev.community);
    if (it == windows.end())
      throw std::invalid_argument("community has no observation window: " + ev.community);
    if (!it->second.contains(ev.t)) {
      ++table.out_of_window;
      continue;
    }
    table.events.push_back(ev);
    ++table.by_community[ev.community];
    ++table.by_url[ev.url_id];
  }
  return table;
}

std::map<std::string, std::size_t> Cascade::counts_by_community() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& ev : events) ++counts[ev.community];
  return counts;
}

std::vector<Cascade> build_cascades(const EventTable& table,
                                    const ObservationWindows& windows) {
  // Stable index keeps the (t, community) tie order reproducible.
  struct Indexed {
    const Event* ev;
    std::size_t idx;
  };
  std::map<std::string, std::vector<Indexed>> by_url;
  for (std::size_t i = 0; i < table.events.size(); ++i) {
    const Event& ev = table.events[i];
    if (!windows.count(ev.community))
      throw std::invalid_argument("community has no observation window: " + ev.community);
    by_url[ev.url_id].push_back({&ev, i});
  }

  std::vector<Cascade> cascades;
  cascades.reserve(by_url.size());
  for (auto& [url, list] : by_url) {
    std::sort(list.begin(), list.end(), [](const Indexed& a, const Indexed& b) {
      if (a.ev->t != b.ev->t) return a.ev->t < b.ev->t;
      if (a.ev->community != b.ev->community) return a.ev->community < b.ev->community;
      return a.idx < b.idx;
    });
    Cascade cascade;
    cascade.url_id = url;
    cascade.windows = windows;
    cascade.events.reserve(list.size());
    for (const auto& item : list) cascade.events.push_back(*item.ev);
    cascades.push_back(std::move(cascade));
  }
  return cascades;
}

void write_events_csv(std::ostream& out, const std::vector<Event>& events) {
  out << "url_id,community,t_hours\n";
  for (const auto& ev : events) {
    out << csv::quote(ev.url_id) << ',' << csv::quote(ev.community) << ','
        << csv::format_fixed(ev.t, 6) << '\n';
  }
}

std::string events_to_csv(const std::vector<Event>& events) {
  std::ostringstream out;
  write_events_csv(out, events);
  return out.str();
}

std::vector<Event> read_events_csv(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "url_id,community,t_hours")
        throw std::runtime_error("events csv: unexpected header '" + line + "'");
      saw_header = true;
      continue;
    }
    auto fields = csv::split_line(line, line_no);
    if (fields.size() != 3)
      throw std::runtime_error("events csv line " + std::to_string(line_no) +
                               ": expected 3 fields, got " + std::to_string(fields.size()));
    Event ev;
    ev.url_id = std::move(fields[0]);
    ev.community = std::move(fields[1]);
    const std::string& num = fields[2];
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), ev.t);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw std::runtime_error("events csv line " + std::to_string(line_no) +
                               ": bad t_hours '" + num + "'");
    events.push_back(std::move(ev));
  }
  if (!saw_header) throw std::runtime_error("events csv: empty input");
  return events;
}

std::vector<Event> events_from_csv(const std::string& text) {
  std::istringstream in(text);
  return read_events_csv(in);
}

}  // namespace urlspread
