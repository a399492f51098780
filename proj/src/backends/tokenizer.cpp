#include "agenda/backends/tokenizer.hpp"

#include <algorithm>

#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"

namespace agenda::backends {

std::vector<std::string> split_words(std::string_view text, bool lowercase) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    bool word_byte = c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (word_byte) {
      if (lowercase && c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
      current.push_back(static_cast<char>(c));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

Vocabulary::Vocabulary(std::unordered_map<std::string, std::size_t> vocab, std::size_t unk_id, bool lowercase)
    : vocab_(std::move(vocab)), unk_id_(unk_id), lowercase_(lowercase) {
  for (const auto& [word, id] : vocab_) size_ = std::max(size_, id + 1);
  size_ = std::max(size_, unk_id_ + 1);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  auto doc = read_json_file(path);
  try {
    std::unordered_map<std::string, std::size_t> vocab;
    for (const auto& [word, id] : doc.at("vocab").items()) vocab.emplace(word, id.get<std::size_t>());
    return Vocabulary(std::move(vocab), doc.value("unk_id", std::size_t{0}), doc.value("lowercase", true));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<std::size_t> Vocabulary::encode(std::string_view text) const {
  std::vector<std::size_t> ids;
  for (const auto& word : split_words(text, lowercase_)) {
    auto it = vocab_.find(word);
    ids.push_back(it == vocab_.end() ? unk_id_ : it->second);
  }
  return ids;
}

std::vector<float> Vocabulary::bag_of_words(std::string_view text) const {
  std::vector<float> counts(size_, 0.0F);
  for (auto id : encode(text)) counts[id] += 1.0F;
  return counts;
}

}  // namespace agenda::backends
