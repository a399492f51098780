#include <filesystem>

#include "agenda/backends/descriptor.hpp"
#include "agenda/core/dataset.hpp"
#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/core/split.hpp"
#include "agenda/dataprep/entailment.hpp"
#include "agenda/dataprep/pairs.hpp"
#include "cli.hpp"

namespace agenda::cli {

namespace {

struct BinarizeArgs {
  std::string input;
  std::string lang = "en";
  std::string out;
};

struct MakePairsArgs {
  std::string data;
  std::string split;
  std::string partition;
  std::size_t negatives = 2;
  std::string out;
};

struct MixArgs {
  std::string pairs;
  std::string out;
  double fraction = 0.30;
  std::string target = "fr";
  std::string translator = "mock";
};

struct SplitArgs {
  std::string data;
  std::vector<std::uint64_t> seeds;
  double dev = 0.10;
  double test = 0.10;
  std::string run_id = "R1";
  std::string out_dir;
};

}  // namespace

/// Messages of `dataset`, optionally restricted to one partition of a split file.
std::vector<Message> select_messages(const Dataset& dataset, const std::string& split_path, const std::string& partition,
                                     std::string* run_id) {
  if (split_path.empty()) {
    if (!partition.empty()) throw ValidationError("--partition needs --split");
    return dataset.messages();
  }
  const auto split = split_from_json(read_json_file(split_path));
  if (run_id) *run_id = split.spec.run_id;
  const auto& ids = split.ids(parse_partition(partition.empty() ? "test" : partition));
  std::vector<Message> out;
  for (const auto& id : ids) out.push_back(dataset.at(id));
  return out;
}

void register_data_commands(CLI::App& app, Registry& registry, std::vector<std::unique_ptr<Common>>& storage) {
  {
    auto* sub = app.add_subcommand("binarize-nli", "Collapse NLI corpora (SNLI/MNLI JSONL, RTE TSV) to entailment pairs");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<BinarizeArgs>();
    sub->add_option("--input", args->input, "corpus file or directory")->required()->check(CLI::ExistingPath);
    sub->add_option("--lang", args->lang, "language tag of the corpus");
    sub->add_option("--out", args->out, "output pair file (JSON Lines)");
    registry.push_back({sub, &common, [args, &common]() {
      dataprep::NliReadResult read;
      if (std::filesystem::is_directory(args->input)) {
        read = dataprep::read_nli_directory(args->input, args->lang);
      } else if (std::filesystem::path(args->input).extension() == ".tsv") {
        read = dataprep::read_rte_tsv(args->input, args->lang);
      } else {
        read = dataprep::read_snli_jsonl(args->input, args->lang);
      }
      std::vector<dataprep::EntailmentPair> pairs;
      std::size_t entailed = 0;
      for (const auto& ex : read.examples) {
        pairs.push_back(dataprep::binarize_nli(ex));
        if (pairs.back().verdict == dataprep::Verdict::entailment) ++entailed;
      }
      write_artifact(common, args->out, dataprep::serialize_pairs(pairs));
      print_summary({{"pairs", pairs.size()},
                     {"entailment", entailed},
                     {"not_entailment", pairs.size() - entailed},
                     {"skipped", read.skipped}});
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("make-pairs", "Generate positive and negative hypothesis pairs from labeled messages");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<MakePairsArgs>();
    sub->add_option("--data", args->data, "labeled dataset (JSON Lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--split", args->split, "split file; restricts to one partition")->check(CLI::ExistingFile);
    sub->add_option("--partition", args->partition, "train|dev|test (default train with --split)");
    sub->add_option("--negatives", args->negatives, "negatives per positive");
    sub->add_option("--out", args->out, "output pair file (JSON Lines)");
    registry.push_back({sub, &common, [args, &common]() {
      const auto& schema = schema_for(common);
      const auto dataset = load_dataset(args->data, schema);
      const auto messages =
          select_messages(dataset, args->split, args->split.empty() ? "" : (args->partition.empty() ? "train" : args->partition), nullptr);
      const auto pairs = dataprep::make_pairs(messages, schema, {args->negatives, common.seed});
      std::size_t positives = 0;
      for (const auto& p : pairs) positives += p.verdict == dataprep::Verdict::entailment ? 1 : 0;
      write_artifact(common, args->out, dataprep::serialize_pairs(pairs));
      print_summary({{"messages", messages.size()}, {"pairs", pairs.size()}, {"positives", positives},
                     {"negatives", pairs.size() - positives}});
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("mix", "Translate a seeded fraction of training pairs into a second language");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<MixArgs>();
    sub->add_option("--pairs", args->pairs, "input pair file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args->out, "output pair file; metadata goes to <out>.meta.json");
    sub->add_option("--fraction", args->fraction, "fraction of pairs to translate")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--target", args->target, "target language");
    sub->add_option("--translator", args->translator, "translator descriptor (mock, mock:fixture=..., http://...)");
    registry.push_back({sub, &common, [args, &common]() {
      const auto pairs = dataprep::load_pairs(args->pairs);
      auto translator = backends::make_translator(backends::parse_descriptor(args->translator));
      const auto result = dataprep::mix_translations(pairs, *translator, {args->fraction, args->target, common.seed});
      write_artifact(common, args->out, dataprep::serialize_pairs(result.pairs));
      nlohmann::ordered_json meta;
      meta["mode"] = "replace_in_place";
      meta["n_pairs"] = result.pairs.size();
      meta["fraction"] = args->fraction;
      meta["target"] = args->target;
      meta["seed"] = common.seed;
      meta["translator"] = translator->name();
      meta["translated"] = result.translated;
      if (!args->out.empty()) write_artifact(common, args->out + ".meta.json", dump_document(meta));
      print_summary({{"pairs", result.pairs.size()}, {"translated", result.translated.size()}});
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("split", "Split a dataset into train/dev/test, keeping translation pairs together");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<SplitArgs>();
    sub->add_option("--data", args->data, "dataset (JSON Lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seeds", args->seeds, "one seed per run (>= 3) for runs R1..Rn; otherwise --seed makes one split")
        ->delimiter(',');
    sub->add_option("--dev", args->dev, "dev fraction")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--test", args->test, "test fraction")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--run-id", args->run_id, "run id for a single split");
    sub->add_option("--out-dir", args->out_dir, "directory for split-<run>.json files");
    registry.push_back({sub, &common, [args, &common]() {
      const auto& schema = schema_for(common);
      const auto dataset = load_dataset(args->data, schema);
      std::vector<DatasetSplit> splits;
      if (args->seeds.empty()) {
        splits.push_back(split_dataset(dataset, {common.seed, args->dev, args->test, args->run_id}));
      } else {
        splits = make_runs(dataset, args->seeds, args->dev, args->test);
      }
      auto runs = nlohmann::ordered_json::array();
      for (const auto& s : splits) {
        if (!args->out_dir.empty()) {
          write_artifact(common, (std::filesystem::path(args->out_dir) / ("split-" + s.spec.run_id + ".json")).string(),
                         dump_document(split_to_json(s)));
        }
        runs.push_back({{"run_id", s.spec.run_id}, {"seed", s.spec.seed}, {"train", s.train.size()},
                        {"dev", s.dev.size()}, {"test", s.test.size()}});
      }
      print_summary({{"messages", dataset.size()}, {"runs", runs}});
      return 0;
    }});
  }
}

}  // namespace agenda::cli
