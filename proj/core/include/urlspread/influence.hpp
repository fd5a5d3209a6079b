#ifndef URLSPREAD_INFLUENCE_HPP
#define URLSPREAD_INFLUENCE_HPP

#include <string>
#include <vector>

#include "urlspread/hawkes_fit.hpp"

namespace urlspread {

// Expected event counts by root cause for one URL (or any sum of URLs).
// caused[a][b] is the expected number of events in community b whose direct
// parent is an event in community a; background[b] the expected number of
// spontaneous events in b; totals[b] the observed event count. For every b,
// sum_a caused[a][b] + background[b] == totals[b] because each event's
// responsibilities sum to one. Additive across URLs.
struct AttributionSummary {
  std::vector<std::string> communities;
  std::vector<std::vector<double>> caused;  // [source][destination]
  std::vector<double> background;
  std::vector<double> totals;
};

// Folds a fitted model's responsibilities into per-pair expected counts.
// Throws std::invalid_argument when the model and cascade community sets
// disagree or the responsibility table does not match the cascade.
AttributionSummary attribute(const FittedModel& fitted, const Cascade& cascade);

// Elementwise sum; inputs must share the exact community ordering (no silent
// reindexing). Throws std::invalid_argument on mismatch or an empty input.
AttributionSummary aggregate(const std::vector<AttributionSummary>& summaries);

// Percentage views of an AttributionSummary. Cells whose denominator
// community has zero observed events are NaN and serialize as JSON null.
//   absolute[a][b]   = 100 * caused[a][b] / totals[b]   (share of b's events)
//   efficiency[a][b] = 100 * caused[a][b] / totals[a]   (yield per a event)
//   external[a]      = sum over b != a of efficiency[a][b]
//   background_share[b] = 100 * background[b] / totals[b]
struct InfluenceReport {
  std::string url_group;
  std::vector<std::string> communities;
  std::vector<std::vector<double>> absolute;
  std::vector<std::vector<double>> efficiency;
  std::vector<double> external;
  std::vector<double> background_share;
};

InfluenceReport influence_matrices(const AttributionSummary& summary,
                                   const std::string& url_group);

enum class ReportFormat { csv, json };

// JSON mirrors InfluenceReport field-for-field and is canonical: parsing and
// re-rendering reproduces the bytes. CSV emits one block per matrix/vector
// with community labels and two-decimal percentages (blank = undefined).
// Throws std::invalid_argument on an empty community list.
std::string render_report(const InfluenceReport& report, ReportFormat format);

InfluenceReport report_from_json(const std::string& text);

}  // namespace urlspread

#endif
