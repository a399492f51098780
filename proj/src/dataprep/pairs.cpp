#include "agenda/dataprep/pairs.hpp"

#include <algorithm>
#include <map>

#include "agenda/core/error.hpp"
#include "agenda/core/rng.hpp"
#include "agenda/dataprep/hypotheses.hpp"

namespace agenda::dataprep {

std::vector<EntailmentPair> make_pairs(std::span<const Message> messages, const LabelSchema& schema,
                                       const PairGenConfig& config) {
  std::map<std::string, std::vector<std::string>, std::less<>> hypotheses;
  auto hypotheses_for = [&](const std::string& lang) -> const std::vector<std::string>& {
    auto it = hypotheses.find(lang);
    if (it == hypotheses.end()) it = hypotheses.emplace(lang, render_hypotheses(schema, lang)).first;
    return it->second;
  };

  std::vector<EntailmentPair> out;
  for (std::size_t m = 0; m < messages.size(); ++m) {
    const auto& msg = messages[m];
    if (!msg.gold || msg.gold->empty()) throw ValidationError("make_pairs: message '" + msg.id + "' has no gold labels");
    const auto& hyps = hypotheses_for(msg.lang);
    const auto gold = schema.indices(*msg.gold);

    std::vector<std::size_t> complement;
    for (std::size_t l = 0; l < schema.size(); ++l) {
      if (!std::binary_search(gold.begin(), gold.end(), l)) complement.push_back(l);
    }

    Rng rng(mix_seed(config.seed, m));
    auto emit = [&](std::size_t label, Verdict verdict) {
      out.push_back(EntailmentPair{msg.text, hyps[label], verdict, msg.lang, Origin::agenda, msg.id, schema.at(label).id});
    };
    for (auto g : gold) {
      emit(g, Verdict::entailment);
      for (auto pick : sample_without_replacement(rng, complement.size(), config.negatives_per_positive)) {
        emit(complement[pick], Verdict::not_entailment);
      }
    }
  }
  return out;
}

}  // namespace agenda::dataprep
