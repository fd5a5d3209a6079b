#include "urlspread/influence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "csv_util.hpp"

namespace urlspread {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double json_cell(const json& value) { return value.is_null() ? kNan : value.get<double>(); }

json cell_json(double value) { return std::isnan(value) ? json() : json(value); }

}  // namespace

AttributionSummary attribute(const FittedModel& fitted, const Cascade& cascade) {
  const IndexedCascade indexed = IndexedCascade::make(fitted.model, cascade);
  if (fitted.model.size() != cascade.windows.size())
    throw std::invalid_argument("model and cascade community sets differ");
  const ResponsibilityTable& table = fitted.responsibilities;
  if (table.size() != indexed.size())
    throw std::invalid_argument("responsibility table does not match cascade");

  const std::size_t k = fitted.model.size();
  AttributionSummary summary;
  summary.communities = fitted.model.communities;
  summary.caused.assign(k, std::vector<double>(k, 0.0));
  summary.background.assign(k, 0.0);
  summary.totals.assign(k, 0.0);
  for (std::size_t i = 0; i < indexed.size(); ++i) {
    const int dst = indexed.community[i];
    summary.totals[dst] += 1.0;
    summary.background[dst] += table.background[i];
    for (const auto& [parent, p] : table.parents[i])
      summary.caused[indexed.community[parent]][dst] += p;
  }
  return summary;
}

AttributionSummary aggregate(const std::vector<AttributionSummary>& summaries) {
  if (summaries.empty()) throw std::invalid_argument("aggregate: no summaries");
  AttributionSummary out = summaries.front();
  for (std::size_t s = 1; s < summaries.size(); ++s) {
    const AttributionSummary& next = summaries[s];
    if (next.communities != out.communities)
      throw std::invalid_argument("aggregate: community order mismatch");
    const std::size_t k = out.communities.size();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) out.caused[a][b] += next.caused[a][b];
    for (std::size_t b = 0; b < k; ++b) {
      out.background[b] += next.background[b];
      out.totals[b] += next.totals[b];
    }
  }
  return out;
}

InfluenceReport influence_matrices(const AttributionSummary& summary,
                                   const std::string& url_group) {
  const std::size_t k = summary.communities.size();
  InfluenceReport report;
  report.url_group = url_group;
  report.communities = summary.communities;
  report.absolute.assign(k, std::vector<double>(k, kNan));
  report.efficiency.assign(k, std::vector<double>(k, kNan));
  report.external.assign(k, kNan);
  report.background_share.assign(k, kNan);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (summary.totals[b] > 0.0)
        report.absolute[a][b] = 100.0 * summary.caused[a][b] / summary.totals[b];
      if (summary.totals[a] > 0.0)
        report.efficiency[a][b] = 100.0 * summary.caused[a][b] / summary.totals[a];
    }
    if (summary.totals[a] > 0.0) {
      double external = 0.0;
      for (std::size_t b = 0; b < k; ++b)
        if (b != a) external += report.efficiency[a][b];
      report.external[a] = external;
    }
  }
  for (std::size_t b = 0; b < k; ++b)
    if (summary.totals[b] > 0.0)
      report.background_share[b] = 100.0 * summary.background[b] / summary.totals[b];
  return report;
}

std::string render_report(const InfluenceReport& report, ReportFormat format) {
  if (report.communities.empty()) throw std::invalid_argument("empty report");
  const std::size_t k = report.communities.size();

  if (format == ReportFormat::json) {
    json obj;
    obj["url_group"] = report.url_group;
    obj["communities"] = report.communities;
    json absolute = json::array(), efficiency = json::array();
    for (std::size_t a = 0; a < k; ++a) {
      json row_abs = json::array(), row_eff = json::array();
      for (std::size_t b = 0; b < k; ++b) {
        row_abs.push_back(cell_json(report.absolute[a][b]));
        row_eff.push_back(cell_json(report.efficiency[a][b]));
      }
      absolute.push_back(std::move(row_abs));
      efficiency.push_back(std::move(row_eff));
    }
    obj["absolute"] = std::move(absolute);
    obj["efficiency"] = std::move(efficiency);
    json external = json::array(), background = json::array();
    for (std::size_t b = 0; b < k; ++b) {
      external.push_back(cell_json(report.external[b]));
      background.push_back(cell_json(report.background_share[b]));
    }
    obj["external"] = std::move(external);
    obj["background_share"] = std::move(background);
    return obj.dump(2) + "\n";
  }

  auto cell = [](double v) { return std::isnan(v) ? std::string() : csv::format_fixed(v, 2); };
  std::ostringstream out;
  out << "url_group," << csv::quote(report.url_group) << "\n\n";
  const struct {
    const char* name;
    const std::vector<std::vector<double>>& matrix;
  } matrices[] = {{"absolute", report.absolute}, {"efficiency", report.efficiency}};
  for (const auto& block : matrices) {
    out << block.name;
    for (const auto& community : report.communities) out << ',' << csv::quote(community);
    out << '\n';
    for (std::size_t a = 0; a < k; ++a) {
      out << csv::quote(report.communities[a]);
      for (std::size_t b = 0; b < k; ++b) out << ',' << cell(block.matrix[a][b]);
      out << '\n';
    }
    out << '\n';
  }
  out << "external,percent\n";
  for (std::size_t a = 0; a < k; ++a)
    out << csv::quote(report.communities[a]) << ',' << cell(report.external[a]) << '\n';
  out << "\nbackground_share,percent\n";
  for (std::size_t b = 0; b < k; ++b)
    out << csv::quote(report.communities[b]) << ',' << cell(report.background_share[b]) << '\n';
  return out.str();
}

InfluenceReport report_from_json(const std::string& text) {
  json obj = json::parse(text);
  InfluenceReport report;
  report.url_group = obj.at("url_group").get<std::string>();
  report.communities = obj.at("communities").get<std::vector<std::string>>();
  const std::size_t k = report.communities.size();
  auto read_matrix = [&](const char* key) {
    std::vector<std::vector<double>> matrix;
    for (const auto& row : obj.at(key)) {
      std::vector<double> out_row;
      for (const auto& value : row) out_row.push_back(json_cell(value));
      matrix.push_back(std::move(out_row));
    }
    if (matrix.size() != k)
      throw std::invalid_argument(std::string("report: bad shape for ") + key);
    return matrix;
  };
  auto read_vector = [&](const char* key) {
    std::vector<double> vec;
    for (const auto& value : obj.at(key)) vec.push_back(json_cell(value));
    if (vec.size() != k)
      throw std::invalid_argument(std::string("report: bad shape for ") + key);
    return vec;
  };
  report.absolute = read_matrix("absolute");
  report.efficiency = read_matrix("efficiency");
  report.external = read_vector("external");
  report.background_share = read_vector("background_share");
  return report;
}

}  // namespace urlspread
