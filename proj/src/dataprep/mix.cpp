#include <algorithm>
#include <cmath>

#include "agenda/core/error.hpp"
#include "agenda/core/rng.hpp"
#include "agenda/dataprep/pairs.hpp"

namespace agenda::dataprep {

MixResult mix_translations(std::span<const EntailmentPair> pairs, backends::Translator& translator, const MixConfig& config) {
  if (!(config.fraction >= 0.0 && config.fraction <= 1.0)) throw ValidationError("mix fraction must be in [0, 1]");
  if (config.target_lang.empty()) throw ValidationError("mix target language is empty");

  MixResult result;
  result.pairs.assign(pairs.begin(), pairs.end());
  const auto count = static_cast<std::size_t>(std::floor(config.fraction * static_cast<double>(pairs.size()) + 1e-9));
  Rng rng(config.seed);
  result.translated = sample_without_replacement(rng, pairs.size(), count);
  std::sort(result.translated.begin(), result.translated.end());

  for (auto index : result.translated) {
    auto& pair = result.pairs[index];
    if (pair.lang == config.target_lang) continue;
    try {
      pair.premise = translator.translate(pair.premise, pair.lang, config.target_lang);
      pair.hypothesis = translator.translate(pair.hypothesis, pair.lang, config.target_lang);
    } catch (const backends::BackendError& e) {
      throw backends::BackendError(e.kind(), "pair " + std::to_string(index) + ": " + e.what(), {index});
    }
    pair.lang = config.target_lang;
  }
  return result;
}

}  // namespace agenda::dataprep
