#include <algorithm>
#include <filesystem>
#include <iostream>

#include "agenda/backends/backend.hpp"
#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "cli.hpp"

namespace agenda::cli {

Common& add_common(CLI::App& sub, std::vector<std::unique_ptr<Common>>& storage) {
  auto& c = *storage.emplace_back(std::make_unique<Common>());
  sub.add_option("--schema", c.schema, "label schema JSON (default: built-in agenda schema)");
  sub.add_option("--config", c.config, "flat JSON config; command-line flags win");
  sub.add_option("--seed", c.seed, "random seed");
  sub.add_flag("--dry-run", c.dry_run, "validate inputs without writing outputs");
  sub.add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "text"}));
  return c;
}

const LabelSchema& schema_for(const Common& common) {
  if (common.schema.empty()) return default_schema();
  static std::map<std::string, LabelSchema> loaded;
  auto it = loaded.find(common.schema);
  if (it == loaded.end()) it = loaded.emplace(common.schema, load_schema(common.schema)).first;
  return it->second;
}

namespace {

bool is_hidden_from_provenance(const std::string& name) {
  static const char* const hidden[] = {"help", "config", "dry-run", "format", "out", "csv", "scores-out", "out-dir", "report"};
  return std::any_of(std::begin(hidden), std::end(hidden), [&](const char* h) { return name == h; });
}

}  // namespace

nlohmann::ordered_json provenance(const CLI::App& sub) {
  nlohmann::ordered_json doc;
  std::string path = sub.get_name();
  for (auto* p = sub.get_parent(); p && p->get_parent(); p = p->get_parent()) path = p->get_name() + " " + path;
  doc["command"] = path;
  nlohmann::ordered_json options = nlohmann::ordered_json::object();
  for (const auto* opt : sub.get_options()) {
    const auto name = opt->get_single_name();
    if (name.empty() || is_hidden_from_provenance(name)) continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_min() == 0) {
        options[name] = true;
      } else if (opt->get_expected_max() > 1) {
        options[name] = results;
      } else {
        options[name] = results.back();
      }
    } else if (opt->get_expected_min() == 0) {
      options[name] = false;
    } else {
      options[name] = opt->get_default_str();
    }
  }
  doc["options"] = std::move(options);
  return doc;
}

void emit_report(const Common& common, const CLI::App& sub, nlohmann::ordered_json doc, const std::string& text,
                 const std::string& out) {
  doc["config"] = provenance(sub);
  if (!out.empty() && !common.dry_run) write_text_file(out, dump_document(doc));
  if (common.format == "text") {
    std::cout << text;
  } else {
    std::cout << dump_document(doc);
  }
}

void write_artifact(const Common& common, const std::string& path, const std::string& contents) {
  if (path.empty() || common.dry_run) return;
  write_text_file(path, contents);
}

void print_summary(const nlohmann::ordered_json& summary) { std::cout << dump_line(summary) << '\n'; }

}  // namespace agenda::cli

namespace {

using agenda::cli::Registry;

int fail(int code, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << agenda::dump_line(err) << '\n';
  return code;
}

CLI::App* selected_leaf(CLI::App& app) {
  CLI::App* node = &app;
  for (;;) {
    auto subs = node->get_subcommands();
    if (subs.empty()) return node;
    node = subs.front();
  }
}

std::string scalar_text(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

/// Turns config keys into extra arguments for options the command line left unset.
std::vector<std::string> config_arguments(CLI::App& leaf, const std::string& path) {
  const auto doc = agenda::read_json_file(path);
  if (!doc.is_object()) throw CLI::ValidationError("--config", "config file must hold a flat JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : doc.items()) {
    auto* opt = leaf.get_option_no_throw("--" + key);
    if (!opt || key == "config" || key == "help") throw CLI::ValidationError("--config", "unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    if (opt->get_expected_min() == 0) {
      if (!value.is_boolean()) throw CLI::ValidationError("--config", "'" + key + "' must be true or false");
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    if (value.is_object() || value.is_null()) throw CLI::ValidationError("--config", "'" + key + "' must be a scalar or an array");
    args.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& v : value) args.push_back(scalar_text(v));
    } else {
      args.push_back(scalar_text(value));
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agenda detection as textual entailment: data preparation, classification, evaluation and annotation."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::vector<std::unique_ptr<agenda::cli::Common>> storage;
  Registry registry;
  agenda::cli::register_data_commands(app, registry, storage);
  agenda::cli::register_model_commands(app, registry, storage);
  agenda::cli::register_eval_commands(app, registry, storage);
  for (auto& cmd : registry) {
    for (auto* opt : cmd.app->get_options()) {
      if (opt->get_expected_max() <= 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    auto* leaf = selected_leaf(app);
    auto it = std::find_if(registry.begin(), registry.end(), [&](const auto& c) { return c.app == leaf; });
    if (it == registry.end()) throw CLI::RequiredError("a subcommand");
    if (!it->common->config.empty()) {
      auto extra = config_arguments(*leaf, it->common->config);
      if (!extra.empty()) {
        args.insert(args.end(), extra.begin(), extra.end());
        app.clear();
        std::vector<std::string> again(args.rbegin(), args.rend());
        app.parse(again);
      }
    }
    return it->run();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  } catch (const agenda::backends::BackendError& e) {
    return fail(4, "backend_" + std::string(agenda::backends::to_string(e.kind())), e.what());
  } catch (const agenda::PreconditionError& e) {
    return fail(5, "precondition", e.what());
  } catch (const agenda::ValidationError& e) {
    return fail(3, "validation", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(3, "validation", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(3, "validation", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}
