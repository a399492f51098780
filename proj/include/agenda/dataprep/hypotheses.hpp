#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "agenda/core/labels.hpp"

namespace agenda::dataprep {

/// Curated hypothesis for (label, lang) when the schema has one, otherwise the
/// fill-in template for `lang` ("This text is about {label}.") over the label's
/// name in that language. Throws ValidationError for an unknown label or a
/// missing name.
std::string render_hypothesis(const LabelSchema& schema, std::string_view label_id, std::string_view lang);

/// render_hypothesis for every label, in schema order.
std::vector<std::string> render_hypotheses(const LabelSchema& schema, std::string_view lang);

std::string label_name(const LabelSchema& schema, std::string_view label_id, std::string_view lang);

/// The label definition in `lang`; throws when the schema has none.
std::string label_definition(const LabelSchema& schema, std::string_view label_id, std::string_view lang);

}  // namespace agenda::dataprep
