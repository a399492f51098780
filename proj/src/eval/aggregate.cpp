#include "agenda/eval/aggregate.hpp"

#include <cmath>
#include <cstdio>

#include "agenda/core/error.hpp"

namespace agenda::eval {

ColumnStats column_stats(std::string column, std::span<const double> values) {
  if (values.size() < 2) throw ValidationError("aggregate: need at least 2 runs for a standard deviation");
  ColumnStats s;
  s.column = std::move(column);
  s.values.assign(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stdev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return s;
}

AggregateReport aggregate_runs(std::span<const MetricsReport> reports) {
  if (reports.size() < 2) throw ValidationError("aggregate: need at least 2 reports");
  AggregateReport out;
  for (const auto& r : reports) out.run_ids.push_back(r.run_id);
  const auto& first = reports.front().columns;
  for (std::size_t c = 0; c < first.size(); ++c) {
    std::vector<double> values;
    for (const auto& r : reports) {
      if (r.columns.size() != first.size() || r.columns[c].first != first[c].first) {
        throw ValidationError("aggregate: report '" + r.run_id + "' has different columns");
      }
      values.push_back(r.columns[c].second);
    }
    out.columns.push_back(column_stats(first[c].first, values));
  }
  return out;
}

double round_to(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  // The nudge keeps values such as 0.125 (stored as 0.12499999...) on the published side.
  return std::round(value * scale * (1.0 + 1e-12)) / scale;
}

nlohmann::ordered_json aggregate_to_json(const AggregateReport& report) {
  nlohmann::ordered_json doc;
  doc["kind"] = "aggregate";
  doc["run_ids"] = report.run_ids;
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  for (const auto& c : report.columns) {
    columns.push_back({{"column", c.column},
                       {"values", c.values},
                       {"mean", c.mean},
                       {"stdev", c.stdev},
                       {"mean_2dp", round_to(c.mean, 2)},
                       {"stdev_2dp", round_to(c.stdev, 2)}});
  }
  doc["columns"] = std::move(columns);
  doc["stdev"] = "sample";
  return doc;
}

std::string aggregate_to_text(const AggregateReport& report) {
  std::string out;
  char buf[128];
  for (const auto& c : report.columns) {
    std::snprintf(buf, sizeof buf, "%-10s AVG %.2f  SD %.2f\n", c.column.c_str(), round_to(c.mean, 2),
                  round_to(c.stdev, 2));
    out += buf;
  }
  return out;
}

}  // namespace agenda::eval
