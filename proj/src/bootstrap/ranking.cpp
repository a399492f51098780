#include "agenda/bootstrap/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "agenda/core/error.hpp"
#include "agenda/core/rng.hpp"
#include "agenda/dataprep/hypotheses.hpp"
#include "agenda/kernels/similarity.hpp"

namespace agenda::bootstrap {

AnchorSource parse_anchor_source(std::string_view name) {
  if (name == "definition") return AnchorSource::definition;
  if (name == "hypothesis") return AnchorSource::hypothesis;
  throw ValidationError("unknown anchor source '" + std::string(name) + "' (definition|hypothesis)");
}

std::string_view to_string(AnchorSource source) noexcept {
  return source == AnchorSource::definition ? "definition" : "hypothesis";
}

void validate_config(const BootstrapConfig& cfg, const LabelSchema& schema) {
  if (cfg.k_per_label < 1) throw ValidationError("bootstrap: k must be >= 1");
  if (!(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0)) {
    throw ValidationError("bootstrap: sample fraction must be in (0, 1]");
  }
  for (const auto& l : cfg.target_labels) schema.index_of(l);
}

nlohmann::ordered_json config_to_json(const BootstrapConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["k"] = cfg.k_per_label;
  doc["source"] = to_string(cfg.source);
  doc["labels"] = cfg.target_labels;
  doc["fraction"] = cfg.sample_fraction;
  doc["seed"] = cfg.seed;
  return doc;
}

BootstrapConfig config_from_json(const nlohmann::json& doc) {
  BootstrapConfig cfg;
  cfg.k_per_label = doc.value("k", cfg.k_per_label);
  cfg.source = parse_anchor_source(doc.value("source", std::string("definition")));
  cfg.target_labels = doc.value("labels", std::vector<LabelId>{});
  cfg.sample_fraction = doc.value("fraction", cfg.sample_fraction);
  cfg.seed = doc.value("seed", cfg.seed);
  return cfg;
}

std::vector<LabelId> target_labels(const BootstrapConfig& cfg, const LabelSchema& schema) {
  if (cfg.target_labels.empty()) {
    std::vector<LabelId> out;
    for (const auto& def : schema.labels()) {
      if (def.id != schema.other_id()) out.push_back(def.id);
    }
    return out;
  }
  return schema.canonicalize(cfg.target_labels);
}

CorpusFile load_corpus_file(const std::filesystem::path& path, const LabelSchema& schema) {
  auto dataset = load_dataset(path, schema);
  return {path.filename().string(), dataset.messages()};
}

std::vector<Message> sample_corpus(std::span<const CorpusFile> corpus, double fraction, std::uint64_t seed) {
  std::vector<Message> out;
  for (std::size_t f = 0; f < corpus.size(); ++f) {
    const auto& msgs = corpus[f].messages;
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(msgs.size()) + 1e-9));
    Rng rng(mix_seed(seed, f));
    auto picked = sample_without_replacement(rng, msgs.size(), k);
    std::sort(picked.begin(), picked.end());
    for (auto i : picked) out.push_back(msgs[i]);
  }
  return out;
}

Ranking rank_candidates(std::span<const CorpusFile> corpus, const LabelSchema& schema, backends::Embedder& embedder,
                        const BootstrapConfig& cfg, const std::set<std::pair<LabelId, std::string>>& exclude) {
  validate_config(cfg, schema);
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, std::vector<const Message*>> by_pair;
  for (const auto& file : corpus) {
    for (const auto& m : file.messages) {
      if (!seen.insert(m.id).second) throw ValidationError("bootstrap: message id '" + m.id + "' occurs twice in the corpus");
      if (m.pair_id) by_pair[*m.pair_id].push_back(&m);
    }
  }

  const auto sampled = sample_corpus(corpus, cfg.sample_fraction, cfg.seed);
  if (sampled.empty()) throw ValidationError("bootstrap: corpus is empty after sampling");
  const auto labels = target_labels(cfg, schema);

  std::map<std::string, std::size_t, std::less<>> lang_group;
  for (const auto& m : sampled) lang_group.emplace(m.lang, 0);
  std::vector<backends::EmbedRequest> anchor_requests;
  std::size_t g = 0;
  for (auto& [lang, group] : lang_group) {
    group = g++;
    for (const auto& label : labels) {
      auto text = cfg.source == AnchorSource::definition ? dataprep::label_definition(schema, label, lang)
                                                         : dataprep::render_hypothesis(schema, label, lang);
      anchor_requests.push_back({std::move(text), lang});
    }
  }
  std::vector<backends::EmbedRequest> message_requests;
  std::vector<std::size_t> groups;
  for (const auto& m : sampled) {
    message_requests.push_back({m.text, m.lang});
    groups.push_back(lang_group.find(m.lang)->second);
  }
  const auto anchors = embedder.embed_batch(anchor_requests);
  const auto rows = embedder.embed_batch(message_requests);
  const auto sims = kernels::cosine_matrix(rows, kernels::GroupedAnchors{anchors, groups, labels.size()});

  Ranking out;
  out.n_sampled = sampled.size();
  for (std::size_t l = 0; l < labels.size(); ++l) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      if (!exclude.count({labels[l], sampled[i].id})) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double sa = sims.at(a, l);
      const double sb = sims.at(b, l);
      if (sa != sb) return sa > sb;
      return sampled[a].id < sampled[b].id;
    });
    LabelQueue queue;
    queue.label = labels[l];
    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto& m = sampled[order[r]];
      if (r < cfg.k_per_label) {
        RankedMessage ranked{m, std::nullopt, sims.at(order[r], l)};
        ranked.message.gold.reset();
        if (m.pair_id) {
          for (const auto* p : by_pair[*m.pair_id]) {
            if (p->id != m.id) {
              ranked.partner = *p;
              ranked.partner->gold.reset();
            }
          }
        }
        queue.candidates.push_back(std::move(ranked));
      } else {
        queue.discarded.push_back({m.id, sims.at(order[r], l)});
      }
    }
    out.queues.push_back(std::move(queue));
  }
  return out;
}

}  // namespace agenda::bootstrap
