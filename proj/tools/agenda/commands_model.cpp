#include <csignal>
#include <iostream>

#include "agenda/backends/descriptor.hpp"
#include "agenda/bootstrap/store.hpp"
#include "agenda/classify/calibrate.hpp"
#include "agenda/classify/decide.hpp"
#include "agenda/classify/similarity.hpp"
#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/service/server.hpp"
#include "cli.hpp"

namespace agenda::cli {

namespace {

struct ClassifyArgs {
  std::string data;
  std::string split;
  std::string partition;
  std::string backend = "mock";
  std::optional<double> tau;
  std::string calibration;
  std::string mode = "entailment";
  std::string source = "hypothesis";
  std::string scores;
  std::string out;
  std::string scores_out;
};

struct CalibrateArgs {
  std::string dev;
  std::string gold;
  double step = 0.01;
  std::string out;
};

struct BootstrapRunArgs {
  std::string data_dir;
  std::vector<std::string> corpus;
  std::string embedder = "mock";
  std::size_t k = 500;
  double fraction = 0.10;
  std::vector<std::string> labels;
  std::string source = "definition";
};

struct BootstrapExportArgs {
  std::string data_dir;
  std::optional<int> round;
  std::string out;
  std::string report;
};

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string backend = "mock";
  std::string embedder;
  std::vector<std::string> corpus;
  std::optional<double> tau;
  std::size_t snapshot_every = 50;
};

/// Mock backends without an explicit seed take --seed.
backends::BackendDescriptor descriptor_with_seed(const std::string& text, std::uint64_t seed) {
  auto desc = backends::parse_descriptor(text);
  if (desc.kind == backends::BackendKind::mock && !desc.options.count("seed")) desc.options["seed"] = std::to_string(seed);
  return desc;
}

std::string mock_text_with_seed(const std::string& text, std::uint64_t seed) {
  if (text.rfind("mock", 0) != 0 || text.find("seed=") != std::string::npos) return text;
  const std::string opt = "seed=" + std::to_string(seed);
  return text == "mock" ? "mock:" + opt : text + "," + opt;
}

service::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

void register_model_commands(CLI::App& app, Registry& registry, std::vector<std::unique_ptr<Common>>& storage) {
  {
    auto* sub = app.add_subcommand("classify", "Score messages against label hypotheses and decide label sets");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<ClassifyArgs>();
    sub->add_option("--data", args->data, "dataset (JSON Lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--split", args->split, "split file")->check(CLI::ExistingFile);
    sub->add_option("--partition", args->partition, "train|dev|test (default test with --split)");
    sub->add_option("--backend", args->backend, "scorer or embedder descriptor");
    auto* tau = sub->add_option("--tau", args->tau, "decision threshold in [0.30, 0.99]");
    auto* cal = sub->add_option("--calibration", args->calibration, "calibration file from `calibrate`")
                    ->check(CLI::ExistingFile);
    tau->excludes(cal);
    sub->add_option("--mode", args->mode, "entailment|similarity")->check(CLI::IsMember({"entailment", "similarity"}));
    sub->add_option("--source", args->source, "similarity anchor: hypothesis|label")
        ->check(CLI::IsMember({"hypothesis", "label", "label_name"}));
    sub->add_option("--scores", args->scores, "decide from an existing score matrix instead of a backend")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args->out, "predictions (JSON Lines)");
    sub->add_option("--scores-out", args->scores_out, "score matrix (JSON Lines)");
    registry.push_back({sub, &common, [args, &common]() {
      const auto& schema = schema_for(common);
      double tau = 0.5;
      if (args->tau) {
        tau = *args->tau;
      } else if (!args->calibration.empty()) {
        tau = classify::load_calibration(args->calibration).tau;
      }
      classify::check_tau(tau);
      const auto dataset = load_dataset(args->data, schema);
      const auto messages = select_messages(dataset, args->split, args->partition, nullptr);

      classify::ScoreMatrix matrix;
      std::vector<classify::Prediction> predictions;
      if (!args->scores.empty()) {
        std::vector<std::string> ids;
        for (const auto& m : messages) ids.push_back(m.id);
        matrix = classify::load_score_matrix(args->scores, schema).select(ids);
        if (matrix.rows() != messages.size()) throw ValidationError("score matrix does not cover every selected message");
        predictions = classify::decide_all(matrix, schema, tau);
      } else if (args->mode == "entailment") {
        auto scorer = backends::make_scorer(descriptor_with_seed(args->backend, common.seed));
        matrix = classify::score_messages(messages, schema, *scorer);
        predictions = classify::decide_all(matrix, schema, tau);
      } else {
        auto embedder = backends::make_embedder(descriptor_with_seed(args->backend, common.seed));
        auto result = classify::classify_by_similarity(messages, schema, *embedder,
                                                       classify::parse_anchor_text(args->source), tau);
        matrix = std::move(result.matrix);
        predictions = std::move(result.predictions);
      }
      write_artifact(common, args->scores_out, classify::serialize_score_matrix(matrix));
      write_artifact(common, args->out, classify::serialize_predictions(predictions));
      std::size_t fallback = 0;
      for (const auto& p : predictions) {
        if (p.labels.size() == 1 && p.labels.front() == schema.other_id()) ++fallback;
      }
      print_summary({{"messages", messages.size()}, {"tau", tau}, {"predicted_other", fallback}});
      return 0;
    }});
  }
  {
    auto* sub = app.add_subcommand("calibrate", "Pick the decision threshold maximizing weighted F1 on dev scores");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<CalibrateArgs>();
    sub->add_option("--dev", args->dev, "dev score matrix (JSON Lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--gold", args->gold, "dataset with gold labels for the dev ids")->required()->check(CLI::ExistingFile);
    sub->add_option("--step", args->step, "sweep step");
    sub->add_option("--out", args->out, "calibration file");
    registry.push_back({sub, &common, [args, &common, sub]() {
      const auto& schema = schema_for(common);
      const auto matrix = classify::load_score_matrix(args->dev, schema);
      const auto dataset = load_dataset(args->gold, schema);
      const auto cal = classify::calibrate_threshold(matrix, dataset, schema, args->step);
      auto doc = classify::calibration_to_json(cal);
      doc["n_messages"] = matrix.rows();
      char text[128];
      std::snprintf(text, sizeof text, "tau %.2f  weighted F1 %.4f  (grid %.2f..%.2f step %g)\n", cal.tau, cal.objective,
                    cal.min_tau, cal.max_tau, cal.step);
      emit_report(common, *sub, std::move(doc), text, args->out);
      return 0;
    }});
  }
  {
    auto* group = app.add_subcommand("bootstrap", "Candidate generation and export of reviewed annotations");
    group->require_subcommand(1);
    {
      auto* sub = group->add_subcommand("run", "Rank a sampled corpus against label anchors and open a review round");
      auto& common = add_common(*sub, storage);
      auto args = std::make_shared<BootstrapRunArgs>();
      sub->add_option("--data-dir", args->data_dir, "review state directory")->required();
      sub->add_option("--corpus", args->corpus, "unlabeled corpus files (JSON Lines)")
          ->required()
          ->check(CLI::ExistingFile);
      sub->add_option("--embedder", args->embedder, "embedder descriptor");
      sub->add_option("--k", args->k, "candidates per label");
      sub->add_option("--fraction", args->fraction, "sample fraction per input file");
      sub->add_option("--labels", args->labels, "target labels for a follow-up round")->delimiter(',');
      sub->add_option("--source", args->source, "anchor text: definition|hypothesis")
          ->check(CLI::IsMember({"definition", "hypothesis"}));
      registry.push_back({sub, &common, [args, &common]() {
        const auto& schema = schema_for(common);
        bootstrap::BootstrapConfig cfg;
        cfg.k_per_label = args->k;
        cfg.sample_fraction = args->fraction;
        cfg.target_labels = args->labels;
        cfg.source = bootstrap::parse_anchor_source(args->source);
        cfg.seed = common.seed;
        bootstrap::validate_config(cfg, schema);
        std::vector<bootstrap::CorpusFile> corpus;
        for (const auto& p : args->corpus) corpus.push_back(bootstrap::load_corpus_file(p, schema));
        auto embedder = backends::make_embedder(descriptor_with_seed(args->embedder, common.seed));
        if (common.dry_run) {
          auto ranking = bootstrap::rank_candidates(corpus, schema, *embedder, cfg);
          std::size_t n = 0;
          for (const auto& q : ranking.queues) n += q.candidates.size();
          print_summary({{"sampled", ranking.n_sampled}, {"candidates", n}});
          return 0;
        }
        bootstrap::Store store(args->data_dir, schema);
        const int round = store.run_round(corpus, *embedder, cfg);
        auto stats = store.read([](const auto& s) { return s.queue_stats(); });
        print_summary({{"round", round}, {"queues", stats.at("labels")}});
        return 0;
      }});
    }
    {
      auto* sub = group->add_subcommand("export", "Export reviewed messages as a labeled dataset with agreement stats");
      auto& common = add_common(*sub, storage);
      auto args = std::make_shared<BootstrapExportArgs>();
      sub->add_option("--data-dir", args->data_dir, "review state directory")->required()->check(CLI::ExistingDirectory);
      sub->add_option("--round", args->round, "round to export (default: all rounds)");
      sub->add_option("--out", args->out, "labeled dataset (JSON Lines)");
      sub->add_option("--report", args->report, "agreement report file");
      registry.push_back({sub, &common, [args, &common, sub]() {
        const auto& schema = schema_for(common);
        bootstrap::Store store(args->data_dir, schema);
        auto result = store.read([&](const auto& s) { return s.export_labeled(args->round); });
        const Dataset dataset(result.messages, schema);
        write_artifact(common, args->out, serialize_dataset(dataset));
        nlohmann::ordered_json doc;
        doc["kind"] = "export";
        doc["round"] = args->round ? nlohmann::ordered_json(*args->round) : nlohmann::ordered_json(nullptr);
        doc["n_messages"] = dataset.size();
        doc["n_candidates"] = result.n_candidates;
        doc["n_exported"] = result.n_exported;
        doc["n_discarded"] = result.n_discarded;
        doc["n_undecided"] = result.n_undecided;
        doc["agreement"] = result.agreement ? eval::agreement_to_json(*result.agreement) : nlohmann::ordered_json(nullptr);
        std::string text = "exported " + std::to_string(dataset.size()) + " messages\n";
        if (result.agreement) text += eval::agreement_to_text(*result.agreement);
        emit_report(common, *sub, std::move(doc), text, args->report);
        return 0;
      }});
    }
  }
  {
    auto* sub = app.add_subcommand("serve", "HTTP API for classification and the annotation workflow");
    auto& common = add_common(*sub, storage);
    auto args = std::make_shared<ServeArgs>();
    sub->add_option("--host", args->host, "bind address");
    sub->add_option("--port", args->port, "port (0 picks a free one)");
    sub->add_option("--data-dir", args->data_dir, "review state directory")->required();
    sub->add_option("--backend", args->backend, "scorer descriptor");
    sub->add_option("--embedder", args->embedder, "embedder descriptor (default: --backend)");
    sub->add_option("--corpus", args->corpus, "default corpus for /bootstrap/run")->check(CLI::ExistingFile);
    sub->add_option("--tau", args->tau, "default threshold for /classify");
    sub->add_option("--snapshot-every", args->snapshot_every, "events between snapshots");
    registry.push_back({sub, &common, [args, &common]() {
      const auto& schema = schema_for(common);
      service::ServiceConfig cfg;
      cfg.data_dir = args->data_dir;
      cfg.backend = mock_text_with_seed(args->backend, common.seed);
      cfg.embedder = args->embedder.empty() ? std::string() : mock_text_with_seed(args->embedder, common.seed);
      for (const auto& c : args->corpus) cfg.corpus.emplace_back(c);
      if (args->tau) {
        classify::check_tau(*args->tau);
        cfg.default_tau = args->tau;
      }
      cfg.store.snapshot_every = args->snapshot_every;
      service::Service svc(cfg, schema);
      if (common.dry_run) {
        print_summary({{"status", "ok"}, {"data_dir", args->data_dir}});
        return 0;
      }
      service::HttpServer server(svc);
      const int port = server.bind(args->host, args->port);
      print_summary({{"listening", args->host + ":" + std::to_string(port)}});
      std::cout.flush();
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      server.listen();
      g_server = nullptr;
      svc.store().write_snapshot();
      return 0;
    }});
  }
}

}  // namespace agenda::cli
