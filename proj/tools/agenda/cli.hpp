#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agenda/core/dataset.hpp"
#include "json.hpp"

namespace agenda::cli {

/// Options every subcommand accepts.
struct Common {
  std::string schema;
  std::string config;
  std::uint64_t seed = 0;
  bool dry_run = false;
  std::string format = "json";
};

/// A registered subcommand: its CLI11 node, common options and action.
struct Command {
  CLI::App* app = nullptr;
  Common* common = nullptr;
  std::function<int()> run;
};

using Registry = std::vector<Command>;

/// Adds --schema, --config, --seed, --dry-run and --format to `sub`.
Common& add_common(CLI::App& sub, std::vector<std::unique_ptr<Common>>& storage);

const LabelSchema& schema_for(const Common& common);

/// Options actually in effect for `sub` (command line, config file or default),
/// minus output paths and presentation flags.
nlohmann::ordered_json provenance(const CLI::App& sub);

/// Writes `doc` to `out` (unless dry-run) and prints it to stdout as JSON or as `text`.
void emit_report(const Common& common, const CLI::App& sub, nlohmann::ordered_json doc, const std::string& text,
                 const std::string& out);

/// Writes a non-report artifact unless dry-run.
void write_artifact(const Common& common, const std::string& path, const std::string& contents);

/// One-line JSON summary on stdout.
void print_summary(const nlohmann::ordered_json& summary);

/// Messages of `dataset`, or only those of one partition of a split file. The
/// split's run id is stored in `run_id` when given.
std::vector<Message> select_messages(const Dataset& dataset, const std::string& split_path, const std::string& partition,
                                     std::string* run_id);

void register_data_commands(CLI::App& app, Registry& registry, std::vector<std::unique_ptr<Common>>& storage);
void register_model_commands(CLI::App& app, Registry& registry, std::vector<std::unique_ptr<Common>>& storage);
void register_eval_commands(CLI::App& app, Registry& registry, std::vector<std::unique_ptr<Common>>& storage);

}  // namespace agenda::cli
