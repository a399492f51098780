#include <iostream>
#include <set>

#include "agenda/bootstrap/store.hpp"
#include "agenda/classify/decide.hpp"
#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/eval/aggregate.hpp"
#include "agenda/eval/agreement.hpp"
#include "agenda/eval/confusion.hpp"
#include "agenda/eval/metrics.hpp"
#include "agenda/eval/significance.hpp"
#include "cli.hpp"

namespace agenda::cli {

namespace {

struct GoldArgs {
  std::string pred;
  std::string gold;
  std::string split;
  std::string partition;
  std::string out;
};

struct EvaluateArgs : GoldArgs {
  std::string run_id;
};

struct ConfusionArgs : GoldArgs {
  std::string csv;
};

struct AgreementArgs {
  std::string ann1;
  std::string ann2;
  std::string data_dir;
  std::optional<int> round;
  std::string out;
};

struct CompareArgs {
  std::string a;
  std::string b;
  std::string gold;
  std::string split;
  std::string partition;
  std::string name_a;
  std::string name_b;
  std::size_t iterations = 10000;
  std::string out;
};

struct AggregateArgs {
  std::vector<std::string> reports;
  std::string out;
};

void add_gold_options(CLI::App& sub, GoldArgs& args) {
  sub.add_option("--pred", args.pred, "predictions (JSON Lines)")->required()->check(CLI::ExistingFile);
  sub.add_option("--gold", args.gold, "dataset with gold labels")->required()->check(CLI::ExistingFile);
  sub.add_option("--split", args.split, "split file; gold restricted to one partition")->check(CLI::ExistingFile);
  sub.add_option("--partition", args.partition, "train|dev|test (default test with --split)");
  sub.add_option("--out", args.out, "report file");
}

std::vector<eval::GoldItem> gold_for(const LabelSchema& schema, const std::string& gold, const std::string& split,
                                     const std::string& partition, std::string* run_id) {
  const auto dataset = load_dataset(gold, schema);
  std::vector<eval::GoldItem> out;
  for (const auto& m : select_messages(dataset, split, partition, run_id)) {
    if (!m.gold) throw ValidationError("message '" + m.id + "' has no gold labels");
    out.push_back({m.id, m.lang, *m.gold});
  }
  return out;
}

/// One-line annotation file: {"id", "labels"} per line.
std::vector<std::pair<std::string, std::string>> load_annotations(const std::string& path, const LabelSchema& schema) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](std::size_t, const nlohmann::json& obj) {
    auto id = obj.at("id").get<std::string>();
    if (!seen.insert(id).second) throw ValidationError("duplicate annotation for '" + id + "'");
    auto labels = schema.canonicalize(obj.at("labels").get<std::vector<std::string>>());
    if (labels.empty()) throw ValidationError("annotation '" + id + "' has no labels");
    out.emplace_back(std::move(id), category_of(labels));
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void register_eval_commands(CLI::App& app, Registry& registry, std::vector<std::unique_ptr<Common>>& storage) {
  {
    auto* sub = app.add_subcommand("evaluate", "Per-class and weighted F1 of predictions against gold");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<EvaluateArgs>();
    add_gold_options(*sub, *args);
    sub->add_option("--run-id", args->run_id, "run id recorded in the report (default: from the split)");
    registry.push_back({sub, &common, [args, &common, sub]() {
      const auto& schema = schema_for(common);
      const auto preds = classify::load_predictions(args->pred, schema);
      std::string run_id;
      const auto gold = gold_for(schema, args->gold, args->split, args->partition, &run_id);
      if (!args->run_id.empty()) run_id = args->run_id;
      std::optional<double> tau;
      if (!preds.empty()) tau = preds.front().tau;
      const auto report = eval::multilabel_metrics(preds, gold, schema, run_id, tau);
      emit_report(common, *sub, eval::metrics_to_json(report), eval::metrics_to_text(report), args->out);
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("confusion", "Multi-label confusion matrix with EXTRA row and MISSED column");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<ConfusionArgs>();
    add_gold_options(*sub, *args);
    sub->add_option("--csv", args->csv, "also write the matrix as CSV");
    registry.push_back({sub, &common, [args, &common, sub]() {
      const auto& schema = schema_for(common);
      const auto preds = classify::load_predictions(args->pred, schema);
      const auto gold = gold_for(schema, args->gold, args->split, args->partition, nullptr);
      const auto matrix = eval::multilabel_confusion(preds, gold, schema);
      write_artifact(common, args->csv, eval::confusion_to_csv(matrix));
      emit_report(common, *sub, eval::confusion_to_json(matrix), eval::confusion_to_text(matrix), args->out);
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("agreement", "Percent agreement and Cohen's kappa between two annotators");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<AgreementArgs>();
    auto* a1 = sub->add_option("--ann1", args->ann1, "first annotator's labels ({id, labels} JSON Lines)")
                   ->check(CLI::ExistingFile);
    auto* a2 = sub->add_option("--ann2", args->ann2, "second annotator's labels")->check(CLI::ExistingFile);
    auto* dir = sub->add_option("--data-dir", args->data_dir, "review state directory instead of files")
                    ->check(CLI::ExistingDirectory);
    a1->needs(a2);
    a2->needs(a1);
    dir->excludes(a1);
    sub->add_option("--round", args->round, "round (with --data-dir; default all)");
    sub->add_option("--out", args->out, "report file");
    registry.push_back({sub, &common, [args, &common, sub]() {
      const auto& schema = schema_for(common);
      eval::AgreementReport report;
      if (!args->data_dir.empty()) {
        bootstrap::Store store(args->data_dir, schema);
        auto r = store.read([&](const auto& s) { return s.agreement(args->round); });
        if (!r) throw PreconditionError("no candidate has two independent decisions yet");
        report = *r;
      } else {
        if (args->ann1.empty()) throw CLI::RequiredError("--ann1/--ann2 or --data-dir");
        const auto a = load_annotations(args->ann1, schema);
        const auto b = load_annotations(args->ann2, schema);
        std::vector<std::string> c1;
        std::vector<std::string> c2;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (i >= b.size() || a[i].first != b[i].first) {
            throw ValidationError("annotation files cover different ids (first mismatch at '" + a[i].first + "')");
          }
          c1.push_back(a[i].second);
          c2.push_back(b[i].second);
        }
        if (b.size() != a.size()) throw ValidationError("annotation files cover different ids");
        report = eval::agreement(c1, c2);
      }
      emit_report(common, *sub, eval::agreement_to_json(report), eval::agreement_to_text(report), args->out);
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("compare", "Approximate randomization test between two systems' predictions");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<CompareArgs>();
    sub->add_option("--a", args->a, "predictions of system A")->required()->check(CLI::ExistingFile);
    sub->add_option("--b", args->b, "predictions of system B")->required()->check(CLI::ExistingFile);
    sub->add_option("--gold", args->gold, "dataset with gold labels")->required()->check(CLI::ExistingFile);
    sub->add_option("--split", args->split, "split file")->check(CLI::ExistingFile);
    sub->add_option("--partition", args->partition, "train|dev|test (default test with --split)");
    sub->add_option("--name-a", args->name_a, "label for system A (default: file name)");
    sub->add_option("--name-b", args->name_b, "label for system B (default: file name)");
    sub->add_option("--iterations", args->iterations, "randomization iterations")->check(CLI::PositiveNumber);
    sub->add_option("--out", args->out, "report file");
    registry.push_back({sub, &common, [args, &common, sub]() {
      const auto& schema = schema_for(common);
      const auto a = classify::load_predictions(args->a, schema);
      const auto b = classify::load_predictions(args->b, schema);
      const auto gold = gold_for(schema, args->gold, args->split, args->partition, nullptr);
      auto result = eval::compare_significance(a, b, gold, schema, args->iterations, common.seed);
      result.model_a = args->name_a.empty() ? std::filesystem::path(args->a).filename().string() : args->name_a;
      result.model_b = args->name_b.empty() ? std::filesystem::path(args->b).filename().string() : args->name_b;
      emit_report(common, *sub, eval::significance_to_json(result), eval::significance_to_text(result), args->out);
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("aggregate", "Mean and sample standard deviation of metrics across runs");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<AggregateArgs>();
    sub->add_option("--reports", args->reports, "metrics reports from `evaluate`, one per run")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args->out, "report file");
    registry.push_back({sub, &common, [args, &common, sub]() {
      std::vector<eval::MetricsReport> reports;
      for (const auto& p : args->reports) reports.push_back(eval::metrics_from_json(read_json_file(p)));
      const auto agg = eval::aggregate_runs(reports);
      emit_report(common, *sub, eval::aggregate_to_json(agg), eval::aggregate_to_text(agg), args->out);
      return 0;
    }});
  }
}

}  // namespace agenda::cli
