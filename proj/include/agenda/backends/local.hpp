#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "agenda/backends/backend.hpp"
#include "agenda/backends/tokenizer.hpp"

namespace agenda::backends {

/// backend.json inside a local model directory. Input roles map to graph input
/// names ("premise"/"hypothesis" for scoring, "text" for embedding).
struct LocalManifest {
  std::string task;  // "score" or "embed"
  std::filesystem::path graph;
  std::filesystem::path tokenizer;
  std::string encoding = "bag_of_words";
  std::map<std::string, std::string> inputs;
  std::string output_name;
  std::string output_role;  // "probability", "logits" or "embedding"
  std::size_t entail_index = 0;

  static LocalManifest load(const std::filesystem::path& dir);
};

class OnnxSession;

/// Scores pairs with an ONNX graph run in-process. One forward pass at a time
/// (internally synchronized), so a shared instance is safe across threads.
class LocalScorer final : public EntailmentScorer {
 public:
  explicit LocalScorer(const std::filesystem::path& dir, std::size_t batch_size = 32);
  ~LocalScorer() override;

  std::string name() const override { return "local"; }

 protected:
  std::vector<EntailmentScore> score_chunk(std::span<const ScoreRequest> chunk) override;

 private:
  LocalManifest manifest_;
  Vocabulary vocab_;
  std::unique_ptr<OnnxSession> session_;
};

class LocalEmbedder final : public Embedder {
 public:
  explicit LocalEmbedder(const std::filesystem::path& dir, std::size_t batch_size = 32);
  ~LocalEmbedder() override;

  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "local"; }

 protected:
  std::vector<EmbeddingVector> embed_chunk(std::span<const EmbedRequest> chunk) override;

 private:
  LocalManifest manifest_;
  Vocabulary vocab_;
  std::unique_ptr<OnnxSession> session_;
  std::size_t dim_ = 0;
};

}  // namespace agenda::backends
