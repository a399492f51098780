#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>

#include "agenda/backends/backend.hpp"

namespace agenda::backends {

/// Deterministic scorer: fixture entries win; anything else maps the
/// (premise, hypothesis) hash through a seeded 64-bit mix into [0, 1).
class MockScorer final : public EntailmentScorer {
 public:
  using Fixture = std::map<std::pair<std::string, std::string>, double>;

  explicit MockScorer(std::uint64_t seed = 0, Fixture fixture = {}, std::size_t batch_size = 32);

  /// {"seed"?: n, "scores": [{"premise", "hypothesis", "p_entail"}]}
  static Fixture load_fixture(const std::filesystem::path& path, std::uint64_t* seed = nullptr);

  std::string name() const override { return "mock"; }
  double hashed_score(std::string_view premise, std::string_view hypothesis) const noexcept;

 protected:
  std::vector<EntailmentScore> score_chunk(std::span<const ScoreRequest> chunk) override;

 private:
  std::uint64_t seed_;
  Fixture fixture_;
};

/// Deterministic embedder: fixture vectors verbatim, otherwise signed feature
/// hashing of the words of the text into `dim` buckets.
class MockEmbedder final : public Embedder {
 public:
  using Fixture = std::map<std::string, std::vector<float>, std::less<>>;

  explicit MockEmbedder(std::size_t dim = 16, std::uint64_t seed = 0, Fixture fixture = {}, std::size_t batch_size = 32);

  /// {"dim"?: n, "vectors": {text: [floats]}}
  static Fixture load_fixture(const std::filesystem::path& path);

  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "mock"; }

 protected:
  std::vector<EmbeddingVector> embed_chunk(std::span<const EmbedRequest> chunk) override;

 private:
  EmbeddingVector hashed(std::string_view text) const;

  std::size_t dim_;
  std::uint64_t seed_;
  Fixture fixture_;
};

/// Returns the input text unchanged for any language pair.
class IdentityTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view src_lang, std::string_view tgt_lang) override;
  bool supports(std::string_view, std::string_view) const override { return true; }
  std::string name() const override { return "mock-identity"; }
};

/// Table-driven translator for tests: only listed language pairs and texts.
class FixtureTranslator final : public Translator {
 public:
  struct Entry {
    std::string src_lang;
    std::string tgt_lang;
    std::string text;
    std::string translation;
  };

  explicit FixtureTranslator(std::vector<Entry> entries);

  /// {"entries": [{"src", "tgt", "text", "translation"}]}
  static FixtureTranslator load(const std::filesystem::path& path);

  std::string translate(std::string_view text, std::string_view src_lang, std::string_view tgt_lang) override;
  bool supports(std::string_view src_lang, std::string_view tgt_lang) const override;
  std::string name() const override { return "mock-fixture"; }

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string, std::less<>> table_;
  std::set<std::pair<std::string, std::string>, std::less<>> pairs_;
};

}  // namespace agenda::backends
