#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "agenda/core/labels.hpp"
#include "json.hpp"

namespace agenda {

inline constexpr std::size_t kMaxMessageChars = 2000;

struct Message {
  std::string id;
  std::string text;
  std::string lang;
  std::optional<std::string> pair_id;
  std::optional<LabelSet> gold;
};

/// Validated, immutable collection of messages. Construction enforces:
/// unique ids, text length cap, known gold labels (canonicalized), every pair_id
/// shared by exactly two messages of different languages, and a label name in
/// the schema for every language present.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Message> messages, const LabelSchema& schema);

  const std::vector<Message>& messages() const noexcept { return messages_; }
  std::size_t size() const noexcept { return messages_.size(); }
  bool empty() const noexcept { return messages_.empty(); }

  const Message* find(const std::string& id) const;
  const Message& at(const std::string& id) const;

  /// The translation counterpart, when the message has one.
  const Message* partner(const Message& message) const;

  /// Messages whose id is in `ids`, in dataset order.
  Dataset subset(const std::vector<std::string>& ids, const LabelSchema& schema) const;

 private:
  std::vector<Message> messages_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_pair_;
};

Message parse_message(const nlohmann::json& obj, const LabelSchema& schema);
nlohmann::ordered_json message_to_json(const Message& message);

Dataset parse_dataset(std::istream& in, const std::string& source, const LabelSchema& schema);
Dataset load_dataset(const std::filesystem::path& path, const LabelSchema& schema);

/// Canonical JSON Lines serialization: keys id, text, lang, pair_id?, gold? in that order.
std::string serialize_dataset(const Dataset& dataset);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Gold occurrences per label id (schema order), over messages that carry gold.
std::map<LabelId, std::size_t> class_counts(const Dataset& dataset, const LabelSchema& schema);

/// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text) noexcept;

}  // namespace agenda
