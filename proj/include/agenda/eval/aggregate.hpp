#pragma once

#include <span>
#include <string>
#include <vector>

#include "agenda/eval/metrics.hpp"
#include "json.hpp"

namespace agenda::eval {

struct ColumnStats {
  std::string column;
  std::vector<double> values;  // one per run
  double mean = 0.0;
  double stdev = 0.0;  // sample (n - 1)
};

/// Mean and sample standard deviation; needs at least two values.
ColumnStats column_stats(std::string column, std::span<const double> values);

struct AggregateReport {
  std::vector<std::string> run_ids;
  std::vector<ColumnStats> columns;
};

/// Per subset column (EN, FR, Overall) across runs. Every report must carry the same columns.
AggregateReport aggregate_runs(std::span<const MetricsReport> reports);

/// Half-away-from-zero rounding at `digits` decimals, as used in the published tables.
double round_to(double value, int digits);

nlohmann::ordered_json aggregate_to_json(const AggregateReport& report);
std::string aggregate_to_text(const AggregateReport& report);

}  // namespace agenda::eval
