#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "agenda/core/dataset.hpp"
#include "agenda/core/labels.hpp"

namespace fixture {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("agenda-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Labels A, B, C plus Other (index 3); English names only.
inline agenda::LabelSchema abc_schema() {
  std::vector<agenda::LabelDef> defs;
  for (const char* id : {"A", "B", "C", "Other"}) {
    defs.push_back({id, {{"en", id}}, {{"en", std::string("definition of ") + id}}, {}});
  }
  return agenda::LabelSchema(std::move(defs), "Other");
}

/// Random non-empty subset of [0, n) with at most `max_size` elements.
inline std::set<std::size_t> random_set(std::mt19937_64& rng, std::size_t n, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size_dist(1, std::min(n, max_size));
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  const auto k = size_dist(rng);
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k)};
}

inline std::vector<std::size_t> as_vector(const std::set<std::size_t>& s) { return {s.begin(), s.end()}; }

/// Synthetic EN/FR translation pairs with gold from the default schema; ~7% carry two labels.
inline void write_synthetic_dataset(const std::filesystem::path& path, std::size_t n_pairs, std::uint64_t seed) {
  const auto& schema = agenda::default_schema();
  const char* en_words[] = {"vote", "protest", "share", "violence", "every", "counts", "readers", "message"};
  const char* fr_words[] = {"voter", "manifester", "partager", "chaque", "compte"};
  std::mt19937_64 rng(seed);
  std::vector<agenda::Message> out;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    agenda::LabelSet gold{schema.at(rng() % schema.size()).id};
    if (rng() % 14 == 0) gold.push_back(schema.at(rng() % (schema.size() - 1)).id);
    gold = schema.canonicalize(gold);
    if (gold.size() > 1) gold.erase(std::remove(gold.begin(), gold.end(), schema.other_id()), gold.end());
    std::string en = "message " + std::to_string(i), fr = "message " + std::to_string(i);
    for (int w = 0; w < 4; ++w) {
      en += std::string(" ") + en_words[rng() % 8];
      fr += std::string(" ") + fr_words[rng() % 5];
    }
    char id[24];
    std::snprintf(id, sizeof id, "m%04zu", i);
    const std::string pair = "p" + std::to_string(i);
    out.push_back({std::string(id) + "en", en, "en", pair, gold});
    out.push_back({std::string(id) + "fr", fr, "fr", pair, gold});
  }
  std::ofstream(path) << agenda::serialize_dataset(agenda::Dataset(out, schema));
}

}  // namespace fixture
