#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agenda/core/dataset.hpp"
#include "json.hpp"

namespace agenda {

struct SplitSpec {
  std::uint64_t seed = 0;
  double dev_fraction = 0.10;
  double test_fraction = 0.10;
  std::string run_id = "R1";
};

enum class Partition { train, dev, test };

Partition parse_partition(std::string_view name);
std::string_view partition_name(Partition p) noexcept;

/// Disjoint train/dev/test id lists, each sorted by id.
struct DatasetSplit {
  SplitSpec spec;
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;

  const std::vector<std::string>& ids(Partition p) const;
};

/// Random (unstratified) split over translation-pair units. A unit is either a
/// single message or both members of a pair, so pairs never straddle partitions.
/// |test| = floor(test_fraction * units), |dev| = floor(dev_fraction * units), rest train.
/// Pure in (set of ids, pair structure, spec): dataset order does not matter.
DatasetSplit split_dataset(const Dataset& dataset, const SplitSpec& spec);

/// One split per seed, run ids R1, R2, ...; needs at least three distinct seeds.
std::vector<DatasetSplit> make_runs(const Dataset& dataset, std::span<const std::uint64_t> seeds,
                                    double dev_fraction = 0.10, double test_fraction = 0.10);

nlohmann::ordered_json split_to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const nlohmann::json& doc);

}  // namespace agenda
