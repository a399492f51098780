#include "agenda/classify/similarity.hpp"

#include <algorithm>
#include <map>

#include "agenda/core/error.hpp"
#include "agenda/dataprep/hypotheses.hpp"
#include "agenda/kernels/similarity.hpp"

namespace agenda::classify {

AnchorText parse_anchor_text(std::string_view name) {
  if (name == "hypothesis") return AnchorText::hypothesis;
  if (name == "label" || name == "label_name") return AnchorText::label_name;
  throw ValidationError("unknown similarity source '" + std::string(name) + "' (hypothesis|label)");
}

SimilarityResult classify_by_similarity(std::span<const Message> messages, const LabelSchema& schema,
                                        backends::Embedder& embedder, AnchorText anchor, double tau) {
  check_tau(tau);
  std::map<std::string, std::size_t, std::less<>> lang_group;
  for (const auto& m : messages) lang_group.emplace(m.lang, 0);
  std::vector<backends::EmbedRequest> anchor_requests;
  std::size_t g = 0;
  for (auto& [lang, group] : lang_group) {
    group = g++;
    for (const auto& def : schema.labels()) {
      auto text = anchor == AnchorText::hypothesis ? dataprep::render_hypothesis(schema, def.id, lang)
                                                   : dataprep::label_name(schema, def.id, lang);
      anchor_requests.push_back({std::move(text), lang});
    }
  }

  std::vector<backends::EmbedRequest> message_requests;
  std::vector<std::size_t> groups;
  for (const auto& m : messages) {
    message_requests.push_back({m.text, m.lang});
    groups.push_back(lang_group.find(m.lang)->second);
  }

  std::vector<backends::EmbeddingVector> anchors;
  std::vector<backends::EmbeddingVector> rows;
  if (!messages.empty()) {
    anchors = embedder.embed_batch(anchor_requests);
    rows = embedder.embed_batch(message_requests);
  }
  auto cos = kernels::cosine_matrix(rows, kernels::GroupedAnchors{anchors, groups, schema.size()});

  std::vector<double> values(cos.values.size());
  std::transform(cos.values.begin(), cos.values.end(), values.begin(),
                 [](double v) { return std::clamp(v, 0.0, 1.0); });
  std::vector<LabelId> labels;
  for (const auto& def : schema.labels()) labels.push_back(def.id);
  std::vector<std::string> ids;
  std::vector<std::string> langs;
  for (const auto& m : messages) {
    ids.push_back(m.id);
    langs.push_back(m.lang);
  }
  SimilarityResult result{ScoreMatrix(std::move(labels), std::move(ids), std::move(langs), std::move(values)), {}};
  result.predictions = decide_all(result.matrix, schema, tau);
  return result;
}

}  // namespace agenda::classify
