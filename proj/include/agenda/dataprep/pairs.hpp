#pragma once

#include <cstdint>
#include <vector>

#include "agenda/backends/backend.hpp"
#include "agenda/core/dataset.hpp"
#include "agenda/dataprep/entailment.hpp"

namespace agenda::dataprep {

struct PairGenConfig {
  std::size_t negatives_per_positive = 2;
  std::uint64_t seed = 0;
};

/// For every message and every gold label (schema order): one entailment pair
/// against that label's hypothesis in the message language, followed by up to
/// `negatives_per_positive` not_entailment pairs whose labels are drawn uniformly
/// without replacement from the labels outside the message's gold set. Each
/// message draws from its own (seed, message index) stream.
std::vector<EntailmentPair> make_pairs(std::span<const Message> messages, const LabelSchema& schema,
                                       const PairGenConfig& config);

struct MixConfig {
  double fraction = 0.30;
  std::string target_lang = "fr";
  std::uint64_t seed = 0;
};

struct MixResult {
  std::vector<EntailmentPair> pairs;
  std::vector<std::size_t> translated;  // indices, ascending
};

/// Translates floor(fraction * N) seeded-uniformly chosen pairs (premise and
/// hypothesis together) into target_lang, in place. Count, order and verdicts are
/// preserved. A selected pair already in target_lang is left as is.
MixResult mix_translations(std::span<const EntailmentPair> pairs, backends::Translator& translator, const MixConfig& config);

}  // namespace agenda::dataprep
