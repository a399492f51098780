#include "agenda/dataprep/hypotheses.hpp"

#include "agenda/core/error.hpp"

namespace agenda::dataprep {

namespace {

constexpr std::string_view kPlaceholder = "{label}";

std::string builtin_template(std::string_view lang) {
  if (lang == "fr") return "Ce texte parle de {label}.";
  return "This text is about {label}.";
}

std::string fill(std::string tmpl, const std::string& name) {
  for (auto pos = tmpl.find(kPlaceholder); pos != std::string::npos; pos = tmpl.find(kPlaceholder, pos + name.size())) {
    tmpl.replace(pos, kPlaceholder.size(), name);
  }
  return tmpl;
}

}  // namespace

std::string label_name(const LabelSchema& schema, std::string_view label_id, std::string_view lang) {
  const auto& def = schema.at(schema.index_of(label_id));
  auto it = def.name.find(lang);
  if (it == def.name.end()) {
    throw ValidationError("label '" + def.id + "' has no name in language '" + std::string(lang) + "'");
  }
  return it->second;
}

std::string render_hypothesis(const LabelSchema& schema, std::string_view label_id, std::string_view lang) {
  const auto& def = schema.at(schema.index_of(label_id));
  if (auto it = def.hypothesis.find(lang); it != def.hypothesis.end() && !it->second.empty()) return it->second;
  auto name = label_name(schema, label_id, lang);
  auto tmpl = schema.templates().find(lang);
  return fill(tmpl != schema.templates().end() ? tmpl->second : builtin_template(lang), name);
}

std::vector<std::string> render_hypotheses(const LabelSchema& schema, std::string_view lang) {
  std::vector<std::string> out;
  out.reserve(schema.size());
  for (const auto& def : schema.labels()) out.push_back(render_hypothesis(schema, def.id, lang));
  return out;
}

std::string label_definition(const LabelSchema& schema, std::string_view label_id, std::string_view lang) {
  const auto& def = schema.at(schema.index_of(label_id));
  auto it = def.definition.find(lang);
  if (it == def.definition.end() || it->second.empty()) {
    throw ValidationError("label '" + def.id + "' has no definition in language '" + std::string(lang) + "'");
  }
  return it->second;
}

}  // namespace agenda::dataprep
