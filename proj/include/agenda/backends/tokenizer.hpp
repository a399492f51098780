#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace agenda::backends {

/// Splits on ASCII non-alphanumerics; bytes >= 0x80 are kept inside words so
/// UTF-8 letters survive. ASCII letters are lowercased when `lowercase` is set.
std::vector<std::string> split_words(std::string_view text, bool lowercase = true);

/// Word-level vocabulary asset ("tokenizer.json": {"vocab": {word: id}, "unk_id", "lowercase"}).
class Vocabulary {
 public:
  Vocabulary(std::unordered_map<std::string, std::size_t> vocab, std::size_t unk_id, bool lowercase);

  static Vocabulary load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return size_; }
  std::vector<std::size_t> encode(std::string_view text) const;

  /// Term-count vector of length size().
  std::vector<float> bag_of_words(std::string_view text) const;

 private:
  std::unordered_map<std::string, std::size_t> vocab_;
  std::size_t unk_id_;
  bool lowercase_;
  std::size_t size_ = 0;
};

}  // namespace agenda::backends
