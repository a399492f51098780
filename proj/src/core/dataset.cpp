#include "agenda/core/dataset.hpp"

#include <fstream>
#include <sstream>

#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"

namespace agenda {

namespace {

std::string required_string(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::size_t utf8_length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

Dataset::Dataset(std::vector<Message> messages, const LabelSchema& schema) : messages_(std::move(messages)) {
  for (std::size_t i = 0; i < messages_.size(); ++i) {
    auto& m = messages_[i];
    if (m.id.empty()) throw ValidationError("message with empty id");
    if (m.lang.empty()) throw ValidationError("message '" + m.id + "' has empty lang");
    if (utf8_length(m.text) > kMaxMessageChars) {
      throw ValidationError("message '" + m.id + "' exceeds " + std::to_string(kMaxMessageChars) + " characters");
    }
    if (!schema.supports_language(m.lang)) {
      throw ValidationError("message '" + m.id + "': schema has no label names for language '" + m.lang + "'");
    }
    if (m.gold) m.gold = schema.canonicalize(*m.gold);
    if (!by_id_.emplace(m.id, i).second) throw ValidationError("duplicate message id '" + m.id + "'");
    if (m.pair_id) by_pair_[*m.pair_id].push_back(i);
  }
  for (const auto& [pair_id, members] : by_pair_) {
    if (members.size() == 1) {
      throw ValidationError("dangling pair_id '" + pair_id + "' (only message '" + messages_[members[0]].id + "')");
    }
    if (members.size() > 2) throw ValidationError("ambiguous pair_id '" + pair_id + "' shared by " + std::to_string(members.size()) + " messages");
    if (messages_[members[0]].lang == messages_[members[1]].lang) {
      throw ValidationError("pair_id '" + pair_id + "' links two messages with the same lang");
    }
  }
}

const Message* Dataset::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &messages_[it->second];
}

const Message& Dataset::at(const std::string& id) const {
  const Message* m = find(id);
  if (!m) throw ValidationError("unknown message id '" + id + "'");
  return *m;
}

const Message* Dataset::partner(const Message& message) const {
  if (!message.pair_id) return nullptr;
  auto it = by_pair_.find(*message.pair_id);
  if (it == by_pair_.end()) return nullptr;
  for (auto idx : it->second) {
    if (messages_[idx].id != message.id) return &messages_[idx];
  }
  return nullptr;
}

Dataset Dataset::subset(const std::vector<std::string>& ids, const LabelSchema& schema) const {
  std::unordered_map<std::string, bool> wanted;
  for (const auto& id : ids) {
    if (!find(id)) throw ValidationError("unknown message id '" + id + "'");
    wanted.emplace(id, true);
  }
  std::vector<Message> out;
  out.reserve(ids.size());
  for (const auto& m : messages_) {
    if (wanted.count(m.id)) out.push_back(m);
  }
  return Dataset(std::move(out), schema);
}

Message parse_message(const nlohmann::json& obj, const LabelSchema& schema) {
  Message m;
  m.id = required_string(obj, "id");
  m.text = required_string(obj, "text");
  m.lang = required_string(obj, "lang");
  if (auto it = obj.find("pair_id"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("field 'pair_id' must be a string");
    m.pair_id = it->get<std::string>();
  }
  if (auto it = obj.find("gold"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("field 'gold' must be an array");
    LabelSet gold;
    for (const auto& label : *it) {
      if (!label.is_string()) throw ValidationError("gold labels must be strings");
      gold.push_back(label.get<std::string>());
    }
    m.gold = schema.canonicalize(gold);
  }
  return m;
}

nlohmann::ordered_json message_to_json(const Message& message) {
  nlohmann::ordered_json obj;
  obj["id"] = message.id;
  obj["text"] = message.text;
  obj["lang"] = message.lang;
  if (message.pair_id) obj["pair_id"] = *message.pair_id;
  if (message.gold) obj["gold"] = *message.gold;
  return obj;
}

Dataset parse_dataset(std::istream& in, const std::string& source, const LabelSchema& schema) {
  std::vector<Message> messages;
  for_each_jsonl(in, source, [&](std::size_t, const nlohmann::json& obj) { messages.push_back(parse_message(obj, schema)); });
  return Dataset(std::move(messages), schema);
}

Dataset load_dataset(const std::filesystem::path& path, const LabelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  return parse_dataset(in, path.string(), schema);
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out;
  for (const auto& m : dataset.messages()) {
    out += dump_line(message_to_json(m));
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_text_file(path, serialize_dataset(dataset));
}

std::map<LabelId, std::size_t> class_counts(const Dataset& dataset, const LabelSchema& schema) {
  std::map<LabelId, std::size_t> counts;
  for (const auto& def : schema.labels()) counts[def.id] = 0;
  for (const auto& m : dataset.messages()) {
    if (!m.gold) continue;
    for (const auto& label : *m.gold) ++counts[label];
  }
  return counts;
}

}  // namespace agenda
