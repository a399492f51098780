#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace agenda {

/// Calls `fn(line_number, object)` for each non-blank line. Malformed JSON raises
/// ParseError with the 1-based line number; errors thrown by `fn` are rethrown as
/// ParseError for that line unless they already are one.
void for_each_jsonl(std::istream& in, const std::string& source,
                    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

/// Compact single-line dump with UTF-8 preserved.
std::string dump_line(const nlohmann::ordered_json& value);

/// Pretty dump used for report documents (2-space indent, trailing newline).
std::string dump_document(const nlohmann::ordered_json& value);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace agenda
