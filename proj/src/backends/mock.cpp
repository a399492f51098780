#include "agenda/backends/mock.hpp"

#include <cmath>

#include "agenda/backends/tokenizer.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/core/rng.hpp"

namespace agenda::backends {

MockScorer::MockScorer(std::uint64_t seed, Fixture fixture, std::size_t batch_size)
    : EntailmentScorer(batch_size), seed_(seed), fixture_(std::move(fixture)) {
  for (const auto& [key, value] : fixture_) {
    if (!(value >= 0.0 && value <= 1.0)) throw ValidationError("mock fixture score outside [0, 1]");
  }
}

MockScorer::Fixture MockScorer::load_fixture(const std::filesystem::path& path, std::uint64_t* seed) {
  auto doc = read_json_file(path);
  Fixture fixture;
  try {
    if (seed && doc.contains("seed")) *seed = doc["seed"].get<std::uint64_t>();
    for (const auto& entry : doc.at("scores")) {
      fixture[{entry.at("premise").get<std::string>(), entry.at("hypothesis").get<std::string>()}] =
          entry.at("p_entail").get<double>();
    }
    for (const auto& [key, value] : fixture) {
      if (!(value >= 0.0 && value <= 1.0)) throw ValidationError("score outside [0, 1] for '" + key.first + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return fixture;
}

double MockScorer::hashed_score(std::string_view premise, std::string_view hypothesis) const noexcept {
  std::uint64_t h = fnv1a64(premise);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(hypothesis, h);
  return unit_interval(mix_seed(seed_, h));
}

std::vector<EntailmentScore> MockScorer::score_chunk(std::span<const ScoreRequest> chunk) {
  std::vector<EntailmentScore> out;
  out.reserve(chunk.size());
  for (const auto& req : chunk) {
    auto it = fixture_.find({req.premise, req.hypothesis});
    out.push_back(EntailmentScore{it != fixture_.end() ? it->second : hashed_score(req.premise, req.hypothesis)});
  }
  return out;
}

MockEmbedder::MockEmbedder(std::size_t dim, std::uint64_t seed, Fixture fixture, std::size_t batch_size)
    : Embedder(batch_size), dim_(dim), seed_(seed), fixture_(std::move(fixture)) {
  if (dim_ == 0) throw ValidationError("mock embedder dim must be positive");
  for (const auto& [text, vec] : fixture_) {
    if (vec.size() != dim_) throw ValidationError("mock embedder fixture for '" + text + "' has wrong dim");
  }
}

MockEmbedder::Fixture MockEmbedder::load_fixture(const std::filesystem::path& path) {
  auto doc = read_json_file(path);
  Fixture fixture;
  try {
    for (const auto& [text, vec] : doc.at("vectors").items()) fixture[text] = vec.get<std::vector<float>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return fixture;
}

EmbeddingVector MockEmbedder::hashed(std::string_view text) const {
  EmbeddingVector v{std::vector<float>(dim_, 0.0F)};
  for (const auto& word : split_words(text)) {
    const std::uint64_t h = mix_seed(seed_, fnv1a64(word));
    v.values[h % dim_] += (h >> 63) ? 1.0F : -1.0F;
  }
  double norm = 0.0;
  for (float x : v.values) norm += static_cast<double>(x) * x;
  if (norm == 0.0) {
    const std::uint64_t base = fnv1a64(text);
    for (std::size_t i = 0; i < dim_; ++i) {
      v.values[i] = static_cast<float>(2.0 * unit_interval(mix_seed(seed_ ^ base, i)) - 1.0);
    }
  }
  return v;
}

std::vector<EmbeddingVector> MockEmbedder::embed_chunk(std::span<const EmbedRequest> chunk) {
  std::vector<EmbeddingVector> out;
  out.reserve(chunk.size());
  for (const auto& req : chunk) {
    auto it = fixture_.find(req.text);
    out.push_back(it != fixture_.end() ? EmbeddingVector{it->second} : hashed(req.text));
  }
  return out;
}

std::string IdentityTranslator::translate(std::string_view text, std::string_view, std::string_view) {
  return std::string(text);
}

FixtureTranslator::FixtureTranslator(std::vector<Entry> entries) {
  for (auto& e : entries) {
    pairs_.emplace(e.src_lang, e.tgt_lang);
    table_[{e.src_lang, e.tgt_lang, e.text}] = std::move(e.translation);
  }
}

FixtureTranslator FixtureTranslator::load(const std::filesystem::path& path) {
  auto doc = read_json_file(path);
  std::vector<Entry> entries;
  try {
    for (const auto& e : doc.at("entries")) {
      entries.push_back({e.at("src").get<std::string>(), e.at("tgt").get<std::string>(), e.at("text").get<std::string>(),
                         e.at("translation").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return FixtureTranslator(std::move(entries));
}

bool FixtureTranslator::supports(std::string_view src_lang, std::string_view tgt_lang) const {
  return pairs_.count(std::pair<std::string, std::string>(src_lang, tgt_lang)) != 0;
}

std::string FixtureTranslator::translate(std::string_view text, std::string_view src_lang, std::string_view tgt_lang) {
  if (!supports(src_lang, tgt_lang)) {
    throw BackendError(BackendErrorKind::unsupported,
                       "translation " + std::string(src_lang) + "->" + std::string(tgt_lang) + " not supported");
  }
  auto it = table_.find(std::make_tuple(std::string(src_lang), std::string(tgt_lang), std::string(text)));
  if (it == table_.end()) throw BackendError(BackendErrorKind::failed, "no fixture translation for '" + std::string(text) + "'");
  return it->second;
}

}  // namespace agenda::backends
