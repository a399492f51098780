#include "agenda/core/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "agenda/core/error.hpp"
#include "agenda/core/rng.hpp"

namespace agenda {

namespace {

// floor(fraction * n) tolerant of products like 0.29 * 100 = 28.999999999999996.
std::size_t fraction_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

void validate(const SplitSpec& spec) {
  auto in_range = [](double f) { return f > 0.0 && f < 0.5; };
  if (!in_range(spec.dev_fraction)) throw ValidationError("dev_fraction must be in (0, 0.5)");
  if (!in_range(spec.test_fraction)) throw ValidationError("test_fraction must be in (0, 0.5)");
  if (spec.dev_fraction + spec.test_fraction >= 1.0) throw ValidationError("dev_fraction + test_fraction must be < 1");
}

}  // namespace

Partition parse_partition(std::string_view name) {
  if (name == "train") return Partition::train;
  if (name == "dev") return Partition::dev;
  if (name == "test") return Partition::test;
  throw ValidationError("unknown partition '" + std::string(name) + "'");
}

std::string_view partition_name(Partition p) noexcept {
  switch (p) {
    case Partition::train: return "train";
    case Partition::dev: return "dev";
    case Partition::test: return "test";
  }
  return "train";
}

const std::vector<std::string>& DatasetSplit::ids(Partition p) const {
  switch (p) {
    case Partition::dev: return dev;
    case Partition::test: return test;
    case Partition::train: break;
  }
  return train;
}

DatasetSplit split_dataset(const Dataset& dataset, const SplitSpec& spec) {
  validate(spec);
  if (dataset.empty()) throw ValidationError("cannot split an empty dataset");

  // Units keyed by their smallest member id so the unit list is independent of file order.
  std::map<std::string, std::vector<std::string>> units;
  std::set<std::string> placed;
  for (const auto& m : dataset.messages()) {
    if (placed.count(m.id)) continue;
    std::vector<std::string> members{m.id};
    if (const Message* other = dataset.partner(m)) members.push_back(other->id);
    std::sort(members.begin(), members.end());
    for (const auto& id : members) placed.insert(id);
    units.emplace(members.front(), std::move(members));
  }

  std::vector<const std::vector<std::string>*> order;
  order.reserve(units.size());
  for (const auto& [key, members] : units) order.push_back(&members);
  Rng rng(spec.seed);
  rng.shuffle(order);

  const std::size_t n_units = order.size();
  const std::size_t n_test = fraction_count(spec.test_fraction, n_units);
  const std::size_t n_dev = fraction_count(spec.dev_fraction, n_units);
  if (n_test == 0 || n_dev == 0 || n_test + n_dev >= n_units) {
    throw ValidationError("split of " + std::to_string(n_units) + " units with dev=" + std::to_string(spec.dev_fraction) +
                          " test=" + std::to_string(spec.test_fraction) + " leaves an empty partition");
  }

  DatasetSplit split;
  split.spec = spec;
  for (std::size_t i = 0; i < n_units; ++i) {
    auto& target = i < n_test ? split.test : (i < n_test + n_dev ? split.dev : split.train);
    target.insert(target.end(), order[i]->begin(), order[i]->end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.dev.begin(), split.dev.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<DatasetSplit> make_runs(const Dataset& dataset, std::span<const std::uint64_t> seeds, double dev_fraction,
                                    double test_fraction) {
  if (seeds.size() < 3) throw ValidationError("make_runs needs at least 3 seeds");
  std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
  if (distinct.size() != seeds.size()) throw ValidationError("make_runs: duplicate seeds");
  std::vector<DatasetSplit> runs;
  runs.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    SplitSpec spec{seeds[i], dev_fraction, test_fraction, "R" + std::to_string(i + 1)};
    runs.push_back(split_dataset(dataset, spec));
  }
  return runs;
}

nlohmann::ordered_json split_to_json(const DatasetSplit& split) {
  nlohmann::ordered_json out;
  out["run_id"] = split.spec.run_id;
  out["seed"] = split.spec.seed;
  out["dev_fraction"] = split.spec.dev_fraction;
  out["test_fraction"] = split.spec.test_fraction;
  out["train"] = split.train;
  out["dev"] = split.dev;
  out["test"] = split.test;
  return out;
}

DatasetSplit split_from_json(const nlohmann::json& doc) {
  try {
    DatasetSplit split;
    split.spec.run_id = doc.at("run_id").get<std::string>();
    split.spec.seed = doc.at("seed").get<std::uint64_t>();
    split.spec.dev_fraction = doc.at("dev_fraction").get<double>();
    split.spec.test_fraction = doc.at("test_fraction").get<double>();
    split.train = doc.at("train").get<std::vector<std::string>>();
    split.dev = doc.at("dev").get<std::vector<std::string>>();
    split.test = doc.at("test").get<std::vector<std::string>>();
    return split;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("split file: ") + e.what());
  }
}

}  // namespace agenda
