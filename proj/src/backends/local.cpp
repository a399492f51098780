#include "agenda/backends/local.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include "agenda/core/jsonl.hpp"

namespace agenda::backends {

LocalManifest LocalManifest::load(const std::filesystem::path& dir) {
  const auto path = dir / "backend.json";
  if (!std::filesystem::exists(path)) {
    throw BackendError(BackendErrorKind::unavailable, "local backend: no backend.json in " + dir.string());
  }
  auto doc = read_json_file(path);
  LocalManifest m;
  try {
    m.task = doc.at("task").get<std::string>();
    m.graph = dir / doc.value("graph", std::string("model.onnx"));
    m.tokenizer = dir / doc.value("tokenizer", std::string("tokenizer.json"));
    m.encoding = doc.value("encoding", std::string("bag_of_words"));
    for (const auto& [role, name] : doc.at("inputs").items()) m.inputs[role] = name.get<std::string>();
    const auto& out = doc.at("output");
    m.output_name = out.at("name").get<std::string>();
    m.output_role = out.at("role").get<std::string>();
    m.entail_index = out.value("entail_index", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (m.encoding != "bag_of_words") throw ValidationError(path.string() + ": unsupported encoding '" + m.encoding + "'");
  const bool score = m.task == "score";
  const bool embed = m.task == "embed";
  if (!score && !embed) throw ValidationError(path.string() + ": task must be 'score' or 'embed'");
  for (const char* role : score ? std::vector<const char*>{"premise", "hypothesis"} : std::vector<const char*>{"text"}) {
    if (!m.inputs.count(role)) throw ValidationError(path.string() + ": missing input role '" + role + "'");
  }
  if (score && m.output_role != "probability" && m.output_role != "logits") {
    throw ValidationError(path.string() + ": scorer output role must be 'probability' or 'logits'");
  }
  if (embed && m.output_role != "embedding") throw ValidationError(path.string() + ": embedder output role must be 'embedding'");
  return m;
}

class OnnxSession {
 public:
  explicit OnnxSession(const std::filesystem::path& graph) {
    if (!std::filesystem::exists(graph)) {
      throw BackendError(BackendErrorKind::unavailable, "local backend: graph not found: " + graph.string());
    }
    try {
      net_ = cv::dnn::readNetFromONNX(graph.string());
    } catch (const cv::Exception& e) {
      throw BackendError(BackendErrorKind::unavailable, "local backend: cannot load " + graph.string() + ": " + e.what());
    }
  }

  std::vector<float> run(const std::vector<std::pair<std::string, std::vector<float>>>& inputs, const std::string& output) {
    std::lock_guard lock(mutex_);
    try {
      for (const auto& [name, values] : inputs) {
        cv::Mat blob(1, static_cast<int>(values.size()), CV_32F, const_cast<float*>(values.data()));
        net_.setInput(blob.clone(), name);
      }
      cv::Mat out = net_.forward(output);
      cv::Mat flat = out.reshape(1, 1);
      return std::vector<float>(flat.begin<float>(), flat.end<float>());
    } catch (const cv::Exception& e) {
      throw BackendError(BackendErrorKind::failed, std::string("local backend: inference failed: ") + e.what());
    }
  }

 private:
  std::mutex mutex_;
  cv::dnn::Net net_;
};

LocalScorer::LocalScorer(const std::filesystem::path& dir, std::size_t batch_size)
    : EntailmentScorer(batch_size),
      manifest_(LocalManifest::load(dir)),
      vocab_(Vocabulary::load(manifest_.tokenizer)),
      session_(std::make_unique<OnnxSession>(manifest_.graph)) {
  if (manifest_.task != "score") throw ValidationError("local model in " + dir.string() + " is not a scorer");
}

LocalScorer::~LocalScorer() = default;

std::vector<EntailmentScore> LocalScorer::score_chunk(std::span<const ScoreRequest> chunk) {
  std::vector<EntailmentScore> out;
  out.reserve(chunk.size());
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    auto raw = session_->run({{manifest_.inputs.at("premise"), vocab_.bag_of_words(chunk[i].premise)},
                              {manifest_.inputs.at("hypothesis"), vocab_.bag_of_words(chunk[i].hypothesis)}},
                             manifest_.output_name);
    if (manifest_.entail_index >= raw.size()) {
      throw BackendError(BackendErrorKind::protocol, "local scorer output too short", {i});
    }
    double p = raw[manifest_.entail_index];
    if (manifest_.output_role == "logits") {
      double peak = *std::max_element(raw.begin(), raw.end());
      double total = 0.0;
      for (float x : raw) total += std::exp(static_cast<double>(x) - peak);
      p = std::exp(static_cast<double>(raw[manifest_.entail_index]) - peak) / total;
    }
    try {
      out.push_back(EntailmentScore::checked(p));
    } catch (const BackendError& e) {
      throw BackendError(e.kind(), e.what(), {i});
    }
  }
  return out;
}

LocalEmbedder::LocalEmbedder(const std::filesystem::path& dir, std::size_t batch_size)
    : Embedder(batch_size),
      manifest_(LocalManifest::load(dir)),
      vocab_(Vocabulary::load(manifest_.tokenizer)),
      session_(std::make_unique<OnnxSession>(manifest_.graph)) {
  if (manifest_.task != "embed") throw ValidationError("local model in " + dir.string() + " is not an embedder");
  dim_ = session_->run({{manifest_.inputs.at("text"), std::vector<float>(vocab_.size(), 0.0F)}}, manifest_.output_name).size();
  if (dim_ == 0) throw BackendError(BackendErrorKind::protocol, "local embedder produced an empty vector");
}

LocalEmbedder::~LocalEmbedder() = default;

std::vector<EmbeddingVector> LocalEmbedder::embed_chunk(std::span<const EmbedRequest> chunk) {
  std::vector<EmbeddingVector> out;
  out.reserve(chunk.size());
  for (const auto& req : chunk) {
    out.push_back(EmbeddingVector{session_->run({{manifest_.inputs.at("text"), vocab_.bag_of_words(req.text)}}, manifest_.output_name)});
  }
  return out;
}

}  // namespace agenda::backends
