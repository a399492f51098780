#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace agenda {

using LabelId = std::string;

/// A set of label ids kept in canonical schema order without duplicates.
using LabelSet = std::vector<LabelId>;

/// Per-language text keyed by BCP-47 code.
using LocalizedText = std::map<std::string, std::string, std::less<>>;

struct LabelDef {
  LabelId id;
  LocalizedText name;
  LocalizedText definition;
  LocalizedText hypothesis;
};

/// Ordered agenda labels plus the fallback class. Label order is canonical: it fixes
/// tie-breaking, serialization order and confusion-matrix layout.
class LabelSchema {
 public:
  LabelSchema(std::vector<LabelDef> labels, LabelId other_id, LocalizedText templates = {});

  const std::vector<LabelDef>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const LabelDef& at(std::size_t index) const { return labels_.at(index); }

  const LabelId& other_id() const noexcept { return other_id_; }
  std::size_t other_index() const noexcept { return other_index_; }

  /// Templates used when a label has no curated hypothesis; "{label}" is replaced by the name.
  const LocalizedText& templates() const noexcept { return templates_; }

  std::optional<std::size_t> find(std::string_view id) const;

  /// Throws ValidationError naming the label when it is not part of the schema.
  std::size_t index_of(std::string_view id) const;

  /// Validates, deduplicates and sorts into schema order.
  LabelSet canonicalize(std::span<const LabelId> ids) const;

  std::vector<std::size_t> indices(std::span<const LabelId> ids) const;
  LabelSet ids(std::span<const std::size_t> indices) const;

  /// True when every label carries a name in `lang`.
  bool supports_language(std::string_view lang) const;

 private:
  std::vector<LabelDef> labels_;
  LabelId other_id_;
  std::size_t other_index_ = 0;
  LocalizedText templates_;
};

LabelSchema parse_schema(const nlohmann::json& doc);
LabelSchema load_schema(const std::filesystem::path& path);
nlohmann::ordered_json schema_to_json(const LabelSchema& schema);

/// The shipped agenda schema (six labels, EN and FR).
const LabelSchema& default_schema();

/// Canonical category string for a label set ("A|B"), used for exact-set agreement.
std::string category_of(const LabelSet& labels);

}  // namespace agenda
