// Command-line front end: ingest -> stats/fit/simulate -> influence -> report.
// Every run is reproducible: identical config + inputs + seed produce
// byte-identical artifacts, and each artifact carries the hashes proving it.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "urlspread/corpus_stats.hpp"
#include "urlspread/events.hpp"
#include "urlspread/hawkes_fit.hpp"
#include "urlspread/hawkes_sim.hpp"
#include "urlspread/influence.hpp"
#include "urlspread/posts.hpp"
#include "urlspread/time_buckets.hpp"
#include "urlspread/version.hpp"

#include "artifact_io.hpp"

namespace {

using nlohmann::json;
using namespace urlspread;
using tools::Provenance;
using tools::ValidationError;

constexpr int kExitValidation = 2;

// ---------------------------------------------------------------------------
// Run configuration: one JSON document; command-line flags override keys.

struct RunConfig {
  json doc = json::object();

  static RunConfig load(const std::string& path) {
    RunConfig config;
    if (path.empty()) return config;
    config.doc = json::parse(tools::read_file(path), nullptr, /*allow_exceptions=*/false);
    if (config.doc.is_discarded() || !config.doc.is_object())
      throw ValidationError("config: not a JSON object: " + path);
    return config;
  }

  std::string text() const { return doc.dump(); }

  std::optional<std::string> path_key(const std::string& key) const {
    if (auto it = doc.find(key); it != doc.end() && it->is_string())
      return it->get<std::string>();
    return std::nullopt;
  }
};

// Flag wins, then config key, then default.
template <typename T>
T pick(const CLI::Option* opt, const T& flag_value, const RunConfig& config,
       const std::string& key, const T& fallback) {
  if (opt != nullptr && opt->count() > 0) return flag_value;
  if (auto it = config.doc.find(key); it != config.doc.end()) {
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config: bad value for '" + key + "'");
    }
  }
  return fallback;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("URLSPREAD_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  for (unsigned w = 0; w < count; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Shared loading helpers.

ObservationWindows load_windows(const std::string& path) {
  try {
    return windows_from_json(tools::read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("windows: " + std::string(e.what()));
  }
}

CommunityMap load_community_map(const std::string& path) {
  if (path.empty()) return CommunityMap::identity();
  try {
    return CommunityMap::from_json(tools::read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("community_map: " + std::string(e.what()));
  }
}

std::set<std::string> load_line_set(const std::string& path, bool normalize_urls) {
  std::istringstream in(tools::read_file(path));
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.insert(normalize_urls ? normalize_url(line) : line);
  }
  return out;
}

// URL groups: {"label": {"urls": "file"}} or {"label": {"shared_by": [labels]}}
// where shared_by is the set intersection of the referenced groups.
std::set<std::string> resolve_url_group(const RunConfig& config, const std::string& label,
                                        std::set<std::string>& visited) {
  if (!visited.insert(label).second)
    throw ValidationError("url_groups: cycle through '" + label + "'");
  auto groups = config.doc.find("url_groups");
  if (groups == config.doc.end() || !groups->is_object() || !groups->contains(label))
    throw ValidationError("url_groups: unknown group '" + label + "'");
  const json& spec = (*groups)[label];
  if (spec.contains("urls")) {
    return load_line_set(spec["urls"].get<std::string>(), /*normalize_urls=*/true);
  }
  if (spec.contains("shared_by")) {
    const auto members = spec["shared_by"].get<std::vector<std::string>>();
    if (members.empty()) throw ValidationError("url_groups: empty shared_by for '" + label + "'");
    std::optional<std::set<std::string>> result;
    for (const auto& member : members) {
      auto urls = resolve_url_group(config, member, visited);
      if (!result) {
        result = std::move(urls);
        continue;
      }
      std::set<std::string> intersection;
      std::set_intersection(result->begin(), result->end(), urls.begin(), urls.end(),
                            std::inserter(intersection, intersection.begin()));
      *result = std::move(intersection);
    }
    return *result;
  }
  throw ValidationError("url_groups: group '" + label + "' needs 'urls' or 'shared_by'");
}

Provenance make_provenance(const RunConfig& config,
                           const std::map<std::string, std::string>& input_paths) {
  Provenance p;
  p.config_hash = tools::hex64(tools::fnv1a(config.text()));
  for (const auto& [name, path] : input_paths)
    p.input_hashes[name] = tools::hex64(tools::fnv1a(tools::read_file(path)));
  return p;
}

json series_to_json(const TimeSeries& series) {
  json points = json::array();
  for (const auto& [key, value] : series.points) points.push_back({key, value});
  return json{{"group", series.group}, {"bucket", series.bucket}, {"points", points}};
}

std::string series_csv(const std::vector<TimeSeries>& list) {
  std::ostringstream out;
  out << "group,bucket,bucket_key,bucket_label,value\n";
  char value_buf[64];
  for (const auto& series : list) {
    for (const auto& [key, value] : series.points) {
      std::string label = series.bucket == "week" ? iso_date(key) : std::to_string(key);
      std::snprintf(value_buf, sizeof(value_buf), "%.6f", value);
      out << series.group << ',' << series.bucket << ',' << key << ',' << label << ','
          << value_buf << '\n';
    }
  }
  return out.str();
}

json ranked_to_json(const RankedTable& table, const std::vector<double>* scores = nullptr) {
  json rows = json::array();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    json row{{"term", table.rows[i].term},
             {"count", table.rows[i].count},
             {"percent", table.rows[i].percent}};
    if (scores) row["score"] = (*scores)[i];
    rows.push_back(std::move(row));
  }
  return json{{"rows", rows},
              {"denominator", table.denominator},
              {"denominator_desc", table.denominator_desc}};
}

// ---------------------------------------------------------------------------
// Subcommands.

struct IngestArgs {
  std::string config_path, posts, windows, community_map, url_filter, group, out_dir;
};

int run_ingest(const IngestArgs& args, const RunConfig& config,
               const std::map<std::string, const CLI::Option*>& opts) {
  const std::string posts_path =
      pick(opts.at("posts"), args.posts, config, "posts", std::string());
  const std::string windows_path =
      pick(opts.at("windows"), args.windows, config, "windows", std::string());
  const std::string map_path =
      pick(opts.at("community_map"), args.community_map, config, "community_map", std::string());
  const std::string out_dir =
      pick(opts.at("out_dir"), args.out_dir, config, "out_dir", std::string("."));
  if (posts_path.empty()) throw ValidationError("ingest: missing required 'posts'");
  if (windows_path.empty()) throw ValidationError("ingest: missing required 'windows'");

  std::map<std::string, std::string> inputs{{"posts", posts_path}, {"windows", windows_path}};
  if (!map_path.empty()) inputs["community_map"] = map_path;

  std::optional<std::set<std::string>> filter;
  if (!args.group.empty()) {
    std::set<std::string> visited;
    filter = resolve_url_group(config, args.group, visited);
  } else if (!args.url_filter.empty()) {
    filter = load_line_set(args.url_filter, /*normalize_urls=*/true);
    inputs["url_filter"] = args.url_filter;
  }

  const ParseResult parsed = parse_posts_file(posts_path);
  const ObservationWindows windows = load_windows(windows_path);
  const CommunityMap community_map = load_community_map(map_path);
  const EventTable table = extract_events(parsed.posts, filter, community_map, windows);

  const Provenance provenance = make_provenance(config, inputs);
  const std::string events_path = out_dir + "/events.csv";
  tools::write_file_atomic(events_path, events_to_csv(table.events));
  tools::write_sidecar(events_path, provenance);

  json summary;
  summary["analysis"] = "ingest";
  summary["posts"] = parsed.posts.size();
  summary["malformed_lines"] = parsed.diagnostics.size();
  json diagnostics = json::array();
  for (std::size_t i = 0; i < parsed.diagnostics.size() && i < 100; ++i)
    diagnostics.push_back(
        {{"line", parsed.diagnostics[i].line}, {"reason", parsed.diagnostics[i].reason}});
  summary["diagnostics"] = std::move(diagnostics);
  summary["events"] = table.events.size();
  summary["out_of_window"] = table.out_of_window;
  summary["by_community"] = table.by_community;
  summary["distinct_urls"] = table.by_url.size();
  if (!args.group.empty()) summary["url_group"] = args.group;
  summary["provenance"] = provenance.to_json();
  tools::write_file_atomic(out_dir + "/ingest_summary.json", summary.dump(2) + "\n");

  std::cout << "ingest: " << table.events.size() << " events, " << table.by_url.size()
            << " urls, " << table.out_of_window << " out-of-window\n";
  return 0;
}

FitConfig fit_config_from(const RunConfig& config, const json& overrides) {
  FitConfig fc;
  json merged = config.doc.value("fit", json::object());
  for (const auto& [key, value] : overrides.items()) merged[key] = value;
  for (const auto& [key, value] : merged.items()) {
    if (key == "max_iters") fc.max_iters = value.get<int>();
    else if (key == "rel_ll_tolerance") fc.rel_ll_tolerance = value.get<double>();
    else if (key == "omega_mode") {
      const auto mode = value.get<std::string>();
      if (mode == "learned") fc.learn_omega = true;
      else if (mode == "fixed") fc.learn_omega = false;
      else throw ValidationError("fit: omega_mode must be 'learned' or 'fixed'");
    } else if (key == "omega_init") fc.omega_init = value.get<double>();
    else if (key == "init_w") fc.init_w = value.get<double>();
    else if (key == "parent_horizon_hours") fc.parent_horizon_hours = value.get<double>();
    else if (key == "min_events_to_fit") fc.min_events_to_fit = value.get<std::size_t>();
    else if (key == "max_w_clamp") fc.max_w_clamp = value.get<double>();
    else throw ValidationError("fit: unknown config key '" + key + "'");
  }
  try {
    fc.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return fc;
}

struct FitArgs {
  std::string config_path, events, windows, out;
  unsigned jobs = 0;
  json overrides = json::object();
};

int run_fit(const FitArgs& args, const RunConfig& config,
            const std::map<std::string, const CLI::Option*>& opts) {
  const std::string events_path =
      pick(opts.at("events"), args.events, config, "events", std::string());
  const std::string windows_path =
      pick(opts.at("windows"), args.windows, config, "windows", std::string());
  const std::string out_path = pick(opts.at("out"), args.out, config, "models", std::string());
  const unsigned jobs = pick(opts.at("jobs"), args.jobs, config, "jobs", default_jobs());
  if (events_path.empty()) throw ValidationError("fit: missing required 'events'");
  if (windows_path.empty()) throw ValidationError("fit: missing required 'windows'");
  if (out_path.empty()) throw ValidationError("fit: missing required 'out'");

  const FitConfig fit_config = fit_config_from(config, args.overrides);
  const ObservationWindows windows = load_windows(windows_path);
  const auto events = events_from_csv(tools::read_file(events_path));
  const EventTable table = make_event_table(events, windows);
  const auto cascades = build_cascades(table, windows);

  std::vector<FittedModel> fitted(cascades.size());
  parallel_for(cascades.size(), jobs,
               [&](std::size_t i) { fitted[i] = fit(cascades[i], fit_config); });

  std::ostringstream out;
  for (std::size_t i = 0; i < cascades.size(); ++i) {
    json record;
    record["url_id"] = cascades[i].url_id;
    record["model"] = json::parse(model_to_json(fitted[i].model));
    record["ll"] = fitted[i].log_lik;
    record["iters"] = fitted[i].iterations;
    record["flags"] = fitted[i].flags;
    out << record.dump() << '\n';
  }
  const Provenance provenance =
      make_provenance(config, {{"events", events_path}, {"windows", windows_path}});
  tools::write_file_atomic(out_path, out.str());
  tools::write_sidecar(out_path, provenance);
  std::cout << "fit: " << cascades.size() << " cascades -> " << out_path << "\n";
  return 0;
}

struct SimulateArgs {
  std::string config_path, params, windows, out, url_id = "sim";
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_events = 1'000'000;
};

int run_simulate(const SimulateArgs& args, const RunConfig& config,
                 const std::map<std::string, const CLI::Option*>& opts) {
  const std::string params_path =
      pick(opts.at("params"), args.params, config, "params", std::string());
  const std::string windows_path =
      pick(opts.at("windows"), args.windows, config, "windows", std::string());
  const std::string out_path = pick(opts.at("out"), args.out, config, "events", std::string());
  const std::uint64_t seed = pick(opts.at("seed"), args.seed, config, "seed", std::uint64_t{0});
  if (params_path.empty()) throw ValidationError("simulate: missing required 'params'");
  if (out_path.empty()) throw ValidationError("simulate: missing required 'out'");
  if (windows_path.empty() && !(args.horizon > 0.0))
    throw ValidationError("simulate: need 'windows' or a positive 'horizon'");

  SimSpec spec;
  try {
    spec.model = model_from_json(tools::read_file(params_path));
  } catch (const json::exception& e) {
    throw ValidationError("params: " + std::string(e.what()));
  }
  std::map<std::string, std::string> inputs{{"params", params_path}};
  if (!windows_path.empty()) {
    spec.windows = load_windows(windows_path);
    inputs["windows"] = windows_path;
  } else {
    for (const auto& community : spec.model.communities)
      spec.windows[community] = {0.0, args.horizon};
  }
  spec.seed = seed;
  spec.max_events = args.max_events;
  spec.url_id = args.url_id;

  SimResult result;
  try {
    result = simulate(spec);
  } catch (const SupercriticalError& e) {
    throw ValidationError(std::string("simulate: ") + e.what());
  }
  tools::write_file_atomic(out_path, events_to_csv(result.cascade.events));
  tools::write_sidecar(out_path, make_provenance(config, inputs));
  std::cout << "simulate: " << result.cascade.events.size() << " events"
            << (result.truncated ? " (truncated)" : "") << " -> " << out_path << "\n";
  return 0;
}

struct InfluenceArgs {
  std::string config_path, models, events, windows, group = "all", out, csv_out;
  double horizon = 720.0;
  unsigned jobs = 0;
};

int run_influence(const InfluenceArgs& args, const RunConfig& config,
                  const std::map<std::string, const CLI::Option*>& opts) {
  const std::string models_path =
      pick(opts.at("models"), args.models, config, "models", std::string());
  const std::string events_path =
      pick(opts.at("events"), args.events, config, "events", std::string());
  const std::string windows_path =
      pick(opts.at("windows"), args.windows, config, "windows", std::string());
  const unsigned jobs = pick(opts.at("jobs"), args.jobs, config, "jobs", default_jobs());
  if (models_path.empty()) throw ValidationError("influence: missing required 'models'");
  if (events_path.empty()) throw ValidationError("influence: missing required 'events'");
  if (windows_path.empty()) throw ValidationError("influence: missing required 'windows'");
  if (args.out.empty()) throw ValidationError("influence: missing required 'out'");

  const ObservationWindows windows = load_windows(windows_path);
  const auto events = events_from_csv(tools::read_file(events_path));
  const EventTable table = make_event_table(events, windows);
  const auto cascades = build_cascades(table, windows);

  std::map<std::string, HawkesModel> models;
  {
    std::istringstream in(tools::read_file(models_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (record.is_discarded() || !record.is_object() || !record.contains("url_id") ||
          !record.contains("model"))
        throw ValidationError("models: bad record at line " + std::to_string(line_no));
      models.emplace(record["url_id"].get<std::string>(),
                     model_from_json(record["model"].dump()));
    }
  }
  for (const auto& cascade : cascades)
    if (!models.count(cascade.url_id))
      throw ValidationError("models: no record for url '" + cascade.url_id + "'");
  if (models.size() != cascades.size())
    throw ValidationError("models: " + std::to_string(models.size()) + " records for " +
                          std::to_string(cascades.size()) + " cascades");

  std::vector<AttributionSummary> summaries(cascades.size());
  parallel_for(cascades.size(), jobs, [&](std::size_t i) {
    FittedModel fitted;
    fitted.model = models.at(cascades[i].url_id);
    fitted.responsibilities = responsibilities(fitted.model, cascades[i], args.horizon);
    summaries[i] = attribute(fitted, cascades[i]);
  });

  const AttributionSummary total = aggregate(summaries);
  const InfluenceReport report = influence_matrices(total, args.group);
  const Provenance provenance = make_provenance(
      config,
      {{"models", models_path}, {"events", events_path}, {"windows", windows_path}});
  tools::write_file_atomic(args.out, render_report(report, ReportFormat::json));
  tools::write_sidecar(args.out, provenance);
  if (!args.csv_out.empty()) {
    tools::write_file_atomic(args.csv_out, render_report(report, ReportFormat::csv));
    tools::write_sidecar(args.csv_out, provenance);
  }
  std::cout << "influence: " << cascades.size() << " urls -> " << args.out << "\n";
  return 0;
}

struct ReportArgs {
  std::string config_path, in, format = "csv", out;
};

int run_report(const ReportArgs& args, const RunConfig& config) {
  if (args.in.empty()) throw ValidationError("report: missing required 'in'");
  if (args.out.empty()) throw ValidationError("report: missing required 'out'");
  ReportFormat format;
  if (args.format == "csv") format = ReportFormat::csv;
  else if (args.format == "json") format = ReportFormat::json;
  else throw ValidationError("report: format must be 'csv' or 'json'");

  InfluenceReport report;
  try {
    report = report_from_json(tools::read_file(args.in));
  } catch (const json::exception& e) {
    throw ValidationError("report: " + std::string(e.what()));
  }
  tools::write_file_atomic(args.out, render_report(report, format));
  tools::write_sidecar(args.out, make_provenance(config, {{"report", args.in}}));
  return 0;
}

struct StatsArgs {
  std::string config_path, posts, analysis, out, csv_out, roster, attribute = "language";
  std::string normalization = "per-week", source = "hashtags", group = "all";
  bool normalized = false;
  bool ascii_only = false;
  std::size_t top_n = 4, top_k = 20, min_support = 20;
  double split_hours = 0.0, epsilon = 1.0;
};

int run_stats(const StatsArgs& args, const RunConfig& config,
              const std::map<std::string, const CLI::Option*>& opts) {
  const std::string posts_path =
      pick(opts.at("posts"), args.posts, config, "posts", std::string());
  if (posts_path.empty()) throw ValidationError("stats: missing required 'posts'");
  if (args.out.empty()) throw ValidationError("stats: missing required 'out'");

  const ParseResult parsed = parse_posts_file(posts_path);
  const auto& posts = parsed.posts;

  AccountAttribute attribute;
  if (args.attribute == "language") attribute = AccountAttribute::language;
  else if (args.attribute == "client") attribute = AccountAttribute::client;
  else throw ValidationError("stats: attribute must be 'language' or 'client'");

  json out;
  out["analysis"] = args.analysis;
  out["group"] = args.group;
  json params = json::object();
  std::vector<TimeSeries> csv_series;

  static const std::map<std::string, ProfileMode> kProfileModes = {
      {"weekly", ProfileMode::weekly},
      {"creation-weekly", ProfileMode::creation_weekly},
      {"hour-of-day", ProfileMode::hour_of_day},
      {"hour-of-week", ProfileMode::hour_of_week},
      {"first-post-weekly", ProfileMode::first_post_weekly},
      {"last-post-weekly", ProfileMode::last_post_weekly}};

  if (auto mode = kProfileModes.find(args.analysis); mode != kProfileModes.end()) {
    const auto series = temporal_profiles(posts, mode->second, args.normalized);
    json data = json::array();
    for (const auto& s : series) data.push_back(series_to_json(s));
    out["data"] = std::move(data);
    params["normalized"] = args.normalized;
    out["denominator"] = "posts (counts)";
    if (args.normalized) out["denominator"] = "group peak week (share of maximum)";
    csv_series = series;
  } else if (args.analysis == "active-share") {
    if (args.roster.empty()) throw ValidationError("stats: active-share needs 'roster'");
    const auto roster = load_line_set(args.roster, /*normalize_urls=*/false);
    const ActiveShare share = active_share_per_week(posts, roster);
    out["data"] = {{"series", series_to_json(share.series)},
                   {"outside_roster", share.outside_roster}};
    out["denominator"] = roster.size();
    params["roster"] = args.roster;
    csv_series = {share.series};
  } else if (args.analysis == "mentions") {
    if (args.roster.empty()) throw ValidationError("stats: mentions needs 'roster'");
    const auto roster = load_line_set(args.roster, /*normalize_urls=*/false);
    const TimeSeries series = intra_group_mentions(posts, roster);
    out["data"] = series_to_json(series);
    out["denominator"] = "posts (counts)";
    params["roster"] = args.roster;
    csv_series = {series};
  } else if (args.analysis == "diversity") {
    const DiversityCdf cdf = diversity_cdf(posts, attribute);
    json points = json::array();
    for (const auto& [c, f] : cdf.cdf) points.push_back({c, f});
    out["data"] = {{"counts", cdf.counts},
                   {"cdf", points},
                   {"skipped_posts", cdf.skipped_posts}};
    out["denominator"] = cdf.counts.size();
    params["attribute"] = args.attribute;
  } else if (args.analysis == "share-over-time") {
    ShareNormalization normalization;
    if (args.normalization == "per-week") normalization = ShareNormalization::per_week;
    else if (args.normalization == "per-value") normalization = ShareNormalization::per_value;
    else throw ValidationError("stats: normalization must be 'per-week' or 'per-value'");
    const auto series = share_over_time(posts, attribute, args.top_n, normalization);
    json data = json::array();
    for (const auto& s : series) data.push_back(series_to_json(s));
    out["data"] = std::move(data);
    out["denominator"] = args.normalization == "per-week" ? "posts in week" : "posts per value";
    params["attribute"] = args.attribute;
    params["top_n"] = args.top_n;
    params["normalization"] = args.normalization;
    csv_series = series;
  } else if (args.analysis == "top-terms") {
    static const std::map<std::string, TermSource> kSources = {
        {"hashtags", TermSource::hashtags},
        {"domains", TermSource::domains},
        {"subreddits", TermSource::subreddits},
        {"description-words", TermSource::description_words},
        {"description-bigrams", TermSource::description_bigrams}};
    auto source = kSources.find(args.source);
    if (source == kSources.end()) throw ValidationError("stats: unknown source '" + args.source + "'");
    TermFilters filters;
    filters.ascii_letters_only = args.ascii_only;
    const RankedTable table = top_terms(posts, source->second, args.top_k, filters);
    out["data"] = ranked_to_json(table);
    out["denominator"] = table.denominator;
    params["source"] = args.source;
    params["k"] = args.top_k;
    params["ascii_only"] = args.ascii_only;
  } else if (args.analysis == "differential") {
    DifferentialConfig dc;
    dc.split_hours = args.split_hours;
    dc.k = args.top_k;
    dc.min_support = args.min_support;
    dc.epsilon_per_day = args.epsilon;
    DifferentialRanking ranking;
    try {
      ranking = differential_ranking(posts, dc);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    out["data"] = {{"before_heavy", ranked_to_json(ranking.before_heavy, &ranking.before_scores)},
                   {"after_heavy", ranked_to_json(ranking.after_heavy, &ranking.after_scores)}};
    out["denominator"] = posts.size();
    params["split_hours"] = args.split_hours;
    params["k"] = args.top_k;
    params["min_support"] = args.min_support;
    params["epsilon_per_day"] = args.epsilon;
  } else if (args.analysis == "follower-friend") {
    const auto groups = follower_friend_summary(posts);
    json data = json::object();
    for (const auto& [group, stats] : groups) {
      json followers = json::array(), friends = json::array();
      for (const auto& [v, f] : stats.followers_cdf) followers.push_back({v, f});
      for (const auto& [v, f] : stats.friends_cdf) friends.push_back({v, f});
      data[group] = {{"followers_cdf", followers},
                     {"friends_cdf", friends},
                     {"median_ratio", stats.median_ratio},
                     {"ratio_accounts", stats.ratio_accounts},
                     {"zero_friends", stats.zero_friends}};
    }
    out["data"] = std::move(data);
    out["denominator"] = "accounts with followers and friends";
  } else {
    throw ValidationError("stats: unknown analysis '" + args.analysis + "'");
  }

  out["params"] = std::move(params);
  out["provenance"] = make_provenance(config, {{"posts", posts_path}}).to_json();
  tools::write_file_atomic(args.out, out.dump(2) + "\n");
  if (!args.csv_out.empty()) tools::write_file_atomic(args.csv_out, series_csv(csv_series));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-community URL cascade analytics"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Extract URL events from a post log");
  std::map<std::string, const CLI::Option*> ingest_opts;
  ingest_opts["posts"] = ingest->add_option("--posts", ingest_args.posts, "NDJSON post log");
  ingest_opts["windows"] =
      ingest->add_option("--windows", ingest_args.windows, "Observation windows JSON");
  ingest_opts["community_map"] =
      ingest->add_option("--community-map", ingest_args.community_map, "Community map JSON");
  ingest->add_option("--url-filter", ingest_args.url_filter, "URL list file (one per line)");
  ingest->add_option("--group", ingest_args.group, "URL group label from config url_groups");
  ingest_opts["out_dir"] = ingest->add_option("--out-dir", ingest_args.out_dir, "Output directory");
  ingest->add_option("--config", ingest_args.config_path, "Run config JSON");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Descriptive post-log analytics");
  std::map<std::string, const CLI::Option*> stats_opts;
  stats_opts["posts"] = stats->add_option("--posts", stats_args.posts, "NDJSON post log");
  stats->add_option("--analysis", stats_args.analysis, "Analysis name")->required();
  stats->add_option("--group", stats_args.group, "Account-group label for the output");
  stats->add_option("--out", stats_args.out, "Output JSON path")->required();
  stats->add_option("--csv", stats_args.csv_out, "Optional CSV path for time series");
  stats->add_option("--roster", stats_args.roster, "Account id list (one per line)");
  stats->add_option("--attribute", stats_args.attribute, "language|client");
  stats->add_flag("--normalized", stats_args.normalized, "Scale weekly series to group peak");
  stats->add_option("--normalization", stats_args.normalization, "per-week|per-value");
  stats->add_option("--top-n", stats_args.top_n, "Values tracked in share-over-time");
  stats->add_option("--top-k", stats_args.top_k, "Rows in ranked tables");
  stats->add_option("--source", stats_args.source, "Term source for top-terms");
  stats->add_flag("--ascii-only", stats_args.ascii_only, "Keep ASCII-letter terms only");
  stats->add_option("--split-time", stats_args.split_hours, "Differential split, hours since epoch");
  stats->add_option("--min-support", stats_args.min_support, "Differential minimum total count");
  stats->add_option("--epsilon", stats_args.epsilon, "Differential smoothing, counts/day");
  stats->add_option("--config", stats_args.config_path, "Run config JSON");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one excitation model per URL cascade");
  std::map<std::string, const CLI::Option*> fit_opts;
  fit_opts["events"] = fit_cmd->add_option("--events", fit_args.events, "Events CSV");
  fit_opts["windows"] = fit_cmd->add_option("--windows", fit_args.windows, "Windows JSON");
  fit_opts["out"] = fit_cmd->add_option("--out", fit_args.out, "Models NDJSON path");
  fit_opts["jobs"] = fit_cmd->add_option("--jobs", fit_args.jobs, "Worker threads")
                         ->envname("URLSPREAD_JOBS");
  fit_cmd->add_option("--config", fit_args.config_path, "Run config JSON");
  double tol_flag = 0, omega_flag = 0, init_w_flag = 0, horizon_flag = 0, clamp_flag = 0;
  int max_iters_flag = 0;
  std::size_t min_events_flag = 0;
  std::string omega_mode_flag;
  auto* opt_iters = fit_cmd->add_option("--max-iters", max_iters_flag, "EM iteration cap");
  auto* opt_tol = fit_cmd->add_option("--tol", tol_flag, "Relative LL tolerance");
  auto* opt_mode = fit_cmd->add_option("--omega-mode", omega_mode_flag, "learned|fixed");
  auto* opt_omega = fit_cmd->add_option("--omega", omega_flag, "Initial (or fixed) decay, 1/hour");
  auto* opt_init_w = fit_cmd->add_option("--init-w", init_w_flag, "Initial branching weight");
  auto* opt_horizon = fit_cmd->add_option("--horizon", horizon_flag, "Parent horizon, hours");
  auto* opt_min_events = fit_cmd->add_option("--min-events", min_events_flag,
                                             "Cascades below this get the background model");
  auto* opt_clamp = fit_cmd->add_option("--max-w", clamp_flag, "Branching weight clamp");

  SimulateArgs sim_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a synthetic cascade");
  std::map<std::string, const CLI::Option*> sim_opts;
  sim_opts["params"] = simulate_cmd->add_option("--params", sim_args.params, "Model JSON");
  sim_opts["windows"] = simulate_cmd->add_option("--windows", sim_args.windows, "Windows JSON");
  simulate_cmd->add_option("--horizon", sim_args.horizon,
                           "Simulate on [0, H] hours for every community (no windows file)");
  sim_opts["seed"] = simulate_cmd->add_option("--seed", sim_args.seed, "PRNG seed");
  simulate_cmd->add_option("--max-events", sim_args.max_events, "Event cap");
  simulate_cmd->add_option("--url-id", sim_args.url_id, "Label for emitted events");
  sim_opts["out"] = simulate_cmd->add_option("--out", sim_args.out, "Events CSV path");
  simulate_cmd->add_option("--config", sim_args.config_path, "Run config JSON");

  InfluenceArgs influence_args;
  auto* influence_cmd =
      app.add_subcommand("influence", "Aggregate attributions into influence matrices");
  std::map<std::string, const CLI::Option*> influence_opts;
  influence_opts["models"] =
      influence_cmd->add_option("--models", influence_args.models, "Models NDJSON from fit");
  influence_opts["events"] =
      influence_cmd->add_option("--events", influence_args.events, "Events CSV");
  influence_opts["windows"] =
      influence_cmd->add_option("--windows", influence_args.windows, "Windows JSON");
  influence_cmd->add_option("--group", influence_args.group, "URL group label for the report");
  influence_cmd->add_option("--out", influence_args.out, "Report JSON path")->required();
  influence_cmd->add_option("--csv", influence_args.csv_out, "Optional report CSV path");
  influence_cmd->add_option("--horizon", influence_args.horizon, "Parent horizon, hours");
  influence_opts["jobs"] = influence_cmd->add_option("--jobs", influence_args.jobs,
                                                     "Worker threads")
                               ->envname("URLSPREAD_JOBS");
  influence_cmd->add_option("--config", influence_args.config_path, "Run config JSON");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Re-render a report JSON");
  report_cmd->add_option("--in", report_args.in, "Report JSON path")->required();
  report_cmd->add_option("--format", report_args.format, "csv|json");
  report_cmd->add_option("--out", report_args.out, "Output path")->required();
  report_cmd->add_option("--config", report_args.config_path, "Run config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*ingest) {
      return run_ingest(ingest_args, RunConfig::load(ingest_args.config_path), ingest_opts);
    }
    if (*stats) {
      return run_stats(stats_args, RunConfig::load(stats_args.config_path), stats_opts);
    }
    if (*fit_cmd) {
      if (opt_iters->count()) fit_args.overrides["max_iters"] = max_iters_flag;
      if (opt_tol->count()) fit_args.overrides["rel_ll_tolerance"] = tol_flag;
      if (opt_mode->count()) fit_args.overrides["omega_mode"] = omega_mode_flag;
      if (opt_omega->count()) fit_args.overrides["omega_init"] = omega_flag;
      if (opt_init_w->count()) fit_args.overrides["init_w"] = init_w_flag;
      if (opt_horizon->count()) fit_args.overrides["parent_horizon_hours"] = horizon_flag;
      if (opt_min_events->count()) fit_args.overrides["min_events_to_fit"] = min_events_flag;
      if (opt_clamp->count()) fit_args.overrides["max_w_clamp"] = clamp_flag;
      return run_fit(fit_args, RunConfig::load(fit_args.config_path), fit_opts);
    }
    if (*simulate_cmd) {
      return run_simulate(sim_args, RunConfig::load(sim_args.config_path), sim_opts);
    }
    if (*influence_cmd) {
      return run_influence(influence_args, RunConfig::load(influence_args.config_path),
                           influence_opts);
    }
    if (*report_cmd) {
      return run_report(report_args, RunConfig::load(report_args.config_path));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
