#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "agenda/classify/decide.hpp"
#include "agenda/classify/score_matrix.hpp"

namespace agenda::classify {

enum class AnchorText { hypothesis, label_name };

/// Accepts "hypothesis", "label" and "label_name".
AnchorText parse_anchor_text(std::string_view name);

struct SimilarityResult {
  ScoreMatrix matrix;
  std::vector<Prediction> predictions;
};

/// Semantic-search baseline: score(m, l) = max(0, cosine(embed(m.text), embed(anchor(l, m.lang)))),
/// then decide_labels at tau.
SimilarityResult classify_by_similarity(std::span<const Message> messages, const LabelSchema& schema,
                                        backends::Embedder& embedder, AnchorText anchor, double tau);

}  // namespace agenda::classify
