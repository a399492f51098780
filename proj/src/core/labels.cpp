#include "agenda/core/labels.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "agenda/core/error.hpp"
#include "default_schema_json.hpp"

namespace agenda {

namespace {

LocalizedText read_localized(const nlohmann::json& obj, const char* key, const std::string& label) {
  LocalizedText out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_object()) throw ValidationError("schema: label '" + label + "' field '" + key + "' must be an object");
  for (const auto& [lang, text] : it->items()) {
    if (!text.is_string()) throw ValidationError("schema: label '" + label + "' " + key + "." + lang + " must be a string");
    out.emplace(lang, text.get<std::string>());
  }
  return out;
}

nlohmann::ordered_json localized_to_json(const LocalizedText& text) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [lang, value] : text) out[lang] = value;
  return out;
}

}  // namespace

LabelSchema::LabelSchema(std::vector<LabelDef> labels, LabelId other_id, LocalizedText templates)
    : labels_(std::move(labels)), other_id_(std::move(other_id)), templates_(std::move(templates)) {
  if (labels_.empty()) throw ValidationError("schema: no labels");
  std::set<std::string_view> seen;
  for (const auto& def : labels_) {
    if (def.id.empty()) throw ValidationError("schema: empty label id");
    if (!seen.insert(def.id).second) throw ValidationError("schema: duplicate label id '" + def.id + "'");
  }
  auto found = find(other_id_);
  if (!found) throw ValidationError("schema: other_id '" + other_id_ + "' is not a label");
  other_index_ = *found;
}

std::optional<std::size_t> LabelSchema::find(std::string_view id) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t LabelSchema::index_of(std::string_view id) const {
  auto found = find(id);
  if (!found) throw ValidationError("unknown label '" + std::string(id) + "'");
  return *found;
}

LabelSet LabelSchema::canonicalize(std::span<const LabelId> ids) const {
  auto idx = indices(ids);
  return this->ids(idx);
}

std::vector<std::size_t> LabelSchema::indices(std::span<const LabelId> ids) const {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(index_of(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LabelSet LabelSchema::ids(std::span<const std::size_t> indices) const {
  LabelSet out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(labels_.at(i).id);
  return out;
}

bool LabelSchema::supports_language(std::string_view lang) const {
  return std::all_of(labels_.begin(), labels_.end(),
                     [&](const LabelDef& def) { return def.name.find(lang) != def.name.end(); });
}

LabelSchema parse_schema(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("schema: document must be an object");
  if (!doc.contains("labels") || !doc["labels"].is_array()) throw ValidationError("schema: missing 'labels' array");
  if (!doc.contains("other_id") || !doc["other_id"].is_string()) throw ValidationError("schema: missing 'other_id'");
  std::vector<LabelDef> labels;
  for (const auto& item : doc["labels"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string()) {
      throw ValidationError("schema: every label needs a string 'id'");
    }
    LabelDef def;
    def.id = item["id"].get<std::string>();
    def.name = read_localized(item, "name", def.id);
    def.definition = read_localized(item, "definition", def.id);
    def.hypothesis = read_localized(item, "hypothesis", def.id);
    labels.push_back(std::move(def));
  }
  LocalizedText templates;
  if (doc.contains("templates")) templates = read_localized(doc, "templates", "<schema>");
  return LabelSchema(std::move(labels), doc["other_id"].get<std::string>(), std::move(templates));
}

LabelSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open schema file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("schema " + path.string() + ": " + e.what());
  }
  return parse_schema(doc);
}

nlohmann::ordered_json schema_to_json(const LabelSchema& schema) {
  nlohmann::ordered_json out;
  out["other_id"] = schema.other_id();
  if (!schema.templates().empty()) out["templates"] = localized_to_json(schema.templates());
  out["labels"] = nlohmann::ordered_json::array();
  for (const auto& def : schema.labels()) {
    nlohmann::ordered_json item;
    item["id"] = def.id;
    item["name"] = localized_to_json(def.name);
    item["definition"] = localized_to_json(def.definition);
    item["hypothesis"] = localized_to_json(def.hypothesis);
    out["labels"].push_back(std::move(item));
  }
  return out;
}

const LabelSchema& default_schema() {
  static const LabelSchema schema = parse_schema(nlohmann::json::parse(detail::kDefaultSchemaJson));
  return schema;
}

std::string category_of(const LabelSet& labels) {
  std::string out;
  for (const auto& id : labels) {
    if (!out.empty()) out += '|';
    out += id;
  }
  return out;
}

}  // namespace agenda
