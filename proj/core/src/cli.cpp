#include "metaview/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "metaview/benchbuild.hpp"
#include "metaview/checkpoint.hpp"
#include "metaview/config.hpp"
#include "metaview/evaluate.hpp"
#include "metaview/verify.hpp"

namespace metaview {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> data_dir;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key-value configuration file");
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--jobs", flags.jobs, "parallel worker cap (0 = hardware)");
  cmd->add_option("--data", flags.data_dir, "dataset root (default $METAVIEW_DATA_DIR)");
  cmd->add_option("--out", flags.out_dir, "output directory");
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig cfg =
      flags.config_path.empty() ? parse_config_text("") : load_config(flags.config_path);
  apply_overrides(cfg, flags.seed, flags.jobs, flags.data_dir);
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "."
                                                                 : path.parent_path());
  std::ofstream out(path);
  if (!out)
    fail(Errc::ingest, "cannot write " + path.string());
  out << text;
}

nlohmann::ordered_json provenance(const RunConfig& cfg) {
  return {{"version", kToolVersion}, {"config_hash", cfg.hash()}, {"seed", cfg.seed}};
}

// ---- dataset/manifest plumbing shared by train and eval ----

struct ManifestTasks {
  BenchmarkManifest manifest;
  std::vector<TaskData> train, dev, test;
};

ManifestTasks load_manifest_tasks(const std::filesystem::path& manifest_path,
                                  const RunConfig& cfg) {
  ManifestTasks out;
  out.manifest = load_benchmark(manifest_path);
  validate_benchmark(out.manifest);

  std::set<std::string> needed;
  for (const auto& t : out.manifest.tasks)
    needed.insert(t.source_dataset);
  DatasetBundles data;
  for (const auto& name : needed) {
    SourceDataset ds =
        load_source_dataset(std::filesystem::path(cfg.data_dir) / name, name, "");
    data[name] = index_dataset(ds, cfg.views);
  }
  out.train = tasks_from_manifest(out.manifest, out.manifest.train, data);
  out.dev = tasks_from_manifest(out.manifest, out.manifest.dev, data);
  out.test = tasks_from_manifest(out.manifest, out.manifest.test, data);
  return out;
}

nlohmann::ordered_json history_json(const RunConfig& cfg, const TrainResult& result) {
  nlohmann::ordered_json doc = provenance(cfg);
  doc["head"] = to_string(cfg.train.head);
  doc["views"] = std::string(cfg.encoder.use_x ? "x" : "") +
                 std::string(cfg.encoder.use_u ? ",u" : "") +
                 std::string(cfg.encoder.use_z ? ",z" : "");
  doc["best_epoch"] = result.best_epoch;
  doc["best_dev_acc"] = result.best_dev_acc;
  doc["optimizer_steps"] = result.optimizer_steps;
  doc["early_stopped"] = result.early_stopped;
  doc["epochs"] = nlohmann::ordered_json::array();
  for (const auto& e : result.history)
    doc["epochs"].push_back({{"epoch", e.epoch},
                             {"train_loss", e.train_loss},
                             {"dev_acc", e.dev_acc},
                             {"lr", e.lr}});
  return doc;
}

// ---- subcommands ----

int cmd_spectra(const CommonFlags& flags, const std::string& dataset_dir,
                const std::string& dataset_name, const std::string& kind, double alpha,
                double t, int k, const std::string& out_file) {
  RunConfig cfg = resolve_config(flags);
  cfg.views.diffusion_kind = diffusion_kind_from_string(kind);
  cfg.views.alpha = alpha;
  cfg.views.heat_t = t;
  cfg.views.d_z = k;
  cfg.views.validate();

  std::filesystem::path dir(dataset_dir);
  const std::string name = dataset_name.empty() ? dir.filename().string() : dataset_name;
  auto graphs = preprocess_dataset(load_tudataset(dir, name), FilterLimits{});
  if (graphs.empty())
    fail(Errc::benchmark, name + ": no graphs survive preprocessing");

  std::string text;
  char buf[32];
  for (const auto& g : graphs) {
    Eigen::VectorXd z = diffusion_spectrum(g, cfg.views);
    text += std::to_string(g.origin_id);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", z(i));
      text += ", ";
      text += buf;
    }
    text += "\n";
  }
  write_text(out_file, text);
  nlohmann::ordered_json meta = provenance(cfg);
  meta["dataset"] = name;
  meta["graphs"] = graphs.size();
  write_text(out_file + ".meta.json", meta.dump(2) + "\n");
  std::cout << "wrote spectra for " << graphs.size() << " graphs to " << out_file << "\n";
  return 0;
}

int cmd_benchbuild(const CommonFlags& flags, const std::string& datasets_file,
                   const std::string& name, const std::string& source_domain,
                   const std::string& target_domain, int dev_tasks, int test_tasks) {
  RunConfig cfg = resolve_config(flags);
  AssembleOptions options;
  options.dev_tasks = dev_tasks;
  options.test_tasks = test_tasks;
  BenchmarkManifest manifest =
      build_benchmark_from_listing(read_dataset_listing(datasets_file), cfg.data_dir, name,
                                   source_domain, target_domain, cfg.seed, options);

  const auto path = std::filesystem::path(flags.out_dir) / (name + ".json");
  std::filesystem::create_directories(flags.out_dir);
  save_benchmark(manifest, path);
  nlohmann::ordered_json meta = provenance(cfg);
  meta["benchmark_hash"] = benchmark_hash(manifest);
  write_text(path.string() + ".meta.json", meta.dump(2) + "\n");
  std::cout << "benchmark " << name << ": " << manifest.train.size() << " train / "
            << manifest.dev.size() << " dev / " << manifest.test.size()
            << " test tasks, hash " << benchmark_hash(manifest) << ", written to "
            << path.string() << "\n";
  return 0;
}

int cmd_train(const CommonFlags& flags, bool synthetic, const std::string& manifest_path) {
  RunConfig cfg = resolve_config(flags);
  std::vector<TaskData> train_tasks, dev_tasks;
  std::string benchmark_name;
  if (synthetic) {
    SynthSuite suite = build_synth_suite(cfg.synth, cfg.views);
    train_tasks = std::move(suite.train);
    dev_tasks = std::move(suite.dev);
    benchmark_name = "synthetic";
  } else {
    if (manifest_path.empty())
      fail(Errc::config, "train needs --benchmark FILE or --synthetic");
    ManifestTasks tasks = load_manifest_tasks(manifest_path, cfg);
    train_tasks = std::move(tasks.train);
    dev_tasks = std::move(tasks.dev);
    benchmark_name = tasks.manifest.name;
  }

  ModelParams model = init_model_params(cfg.encoder, cfg.views, cfg.train.head, cfg.seed);
  TrainResult result = meta_train(train_tasks, dev_tasks, model, cfg.encoder, cfg.train);

  std::filesystem::create_directories(flags.out_dir);
  const auto ckpt = std::filesystem::path(flags.out_dir) / "model.ckpt";
  save_checkpoint(ckpt, model.store);
  write_text(ckpt.string() + ".meta.json", provenance(cfg).dump(2) + "\n");
  nlohmann::ordered_json doc = history_json(cfg, result);
  doc["benchmark"] = benchmark_name;
  write_text(std::filesystem::path(flags.out_dir) / "history.json", doc.dump(2) + "\n");
  std::cout << "trained " << result.optimizer_steps << " steps on " << benchmark_name
            << ", best dev acc " << result.best_dev_acc << " at epoch " << result.best_epoch
            << "; checkpoint " << ckpt.string() << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& flags, bool synthetic, const std::string& manifest_path,
             const std::string& checkpoint_path, std::optional<int> runs) {
  RunConfig cfg = resolve_config(flags);
  if (runs)
    cfg.eval.runs = *runs;

  std::vector<TaskData> test_tasks;
  std::string benchmark_name;
  if (synthetic) {
    SynthSuite suite = build_synth_suite(cfg.synth, cfg.views);
    test_tasks = std::move(suite.test);
    benchmark_name = "synthetic";
  } else {
    if (manifest_path.empty())
      fail(Errc::config, "eval needs --benchmark FILE or --synthetic");
    ManifestTasks tasks = load_manifest_tasks(manifest_path, cfg);
    test_tasks = std::move(tasks.test);
    benchmark_name = tasks.manifest.name;
  }

  ModelParams model = init_model_params(cfg.encoder, cfg.views, cfg.train.head, cfg.seed);
  load_checkpoint(checkpoint_path, model.store);

  EvalReport report = evaluate(test_tasks, model, cfg.encoder, cfg.train.head, cfg.eval);
  report.benchmark = benchmark_name;
  report.config_hash = cfg.hash();

  std::filesystem::create_directories(flags.out_dir);
  write_text(std::filesystem::path(flags.out_dir) / "metrics.json",
             eval_report_json(report));
  const std::string table = eval_report_table(report);
  write_text(std::filesystem::path(flags.out_dir) / "metrics.txt", table);
  std::cout << table;
  return 0;
}

int cmd_ablate(const CommonFlags& flags, bool synthetic, const std::string& manifest_path) {
  RunConfig base = resolve_config(flags);
  struct Row {
    std::string views;
    double mean, stdev;
    int best_epoch;
  };
  std::vector<Row> rows;
  const std::vector<std::array<bool, 3>> sets = {
      {true, false, false}, {true, true, false}, {true, false, true}, {true, true, true}};

  for (const auto& set : sets) {
    RunConfig cfg = base;
    cfg.encoder.use_x = set[0];
    cfg.encoder.use_u = set[1];
    cfg.encoder.use_z = set[2];

    std::vector<TaskData> train_tasks, dev_tasks, test_tasks;
    if (synthetic || manifest_path.empty()) {
      SynthSuite suite = build_synth_suite(cfg.synth, cfg.views);
      train_tasks = std::move(suite.train);
      dev_tasks = std::move(suite.dev);
      test_tasks = std::move(suite.test);
    } else {
      ManifestTasks tasks = load_manifest_tasks(manifest_path, cfg);
      train_tasks = std::move(tasks.train);
      dev_tasks = std::move(tasks.dev);
      test_tasks = std::move(tasks.test);
    }

    ModelParams model = init_model_params(cfg.encoder, cfg.views, cfg.train.head, cfg.seed);
    TrainResult result = meta_train(train_tasks, dev_tasks, model, cfg.encoder, cfg.train);
    EvalReport report = evaluate(test_tasks, model, cfg.encoder, cfg.train.head, cfg.eval);

    std::string label = std::string(set[0] ? "x" : "");
    if (set[1])
      label += label.empty() ? "u" : ",u";
    if (set[2])
      label += label.empty() ? "z" : ",z";
    rows.push_back({label, report.mean, report.stdev, result.best_epoch});
  }

  nlohmann::ordered_json doc = provenance(base);
  doc["rows"] = nlohmann::ordered_json::array();
  std::string table = "views    mean      std       best_epoch\n";
  char line[128];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-7s  %8.4f  %8.4f  %d\n", r.views.c_str(), r.mean,
                  r.stdev, r.best_epoch);
    table += line;
    doc["rows"].push_back({{"views", r.views},
                           {"mean", r.mean},
                           {"std", r.stdev},
                           {"best_epoch", r.best_epoch}});
  }
  std::filesystem::create_directories(flags.out_dir);
  write_text(std::filesystem::path(flags.out_dir) / "ablation.json", doc.dump(2) + "\n");
  write_text(std::filesystem::path(flags.out_dir) / "ablation.txt", table);
  std::cout << table;
  return 0;
}

int cmd_verify(bool quick, std::uint64_t seed) {
  auto results = run_verify_suites(quick, seed);
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] %-32s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.detail.c_str(), r.seconds);
    std::cout << line;
  }
  std::cout << (all_passed(results) ? "verify: all suites passed\n"
                                    : "verify: FAILURES present\n");
  return all_passed(results) ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"multi-view graph encoder and metric meta-learning toolkit"};
  app.require_subcommand(1);

  // benchbuild
  CommonFlags bb_flags;
  std::string bb_datasets, bb_name = "benchmark", bb_source = "molecules", bb_target;
  int bb_dev = 5, bb_test = 0;
  auto* bb = app.add_subcommand("benchbuild", "assemble a benchmark manifest");
  add_common(bb, bb_flags);
  bb->add_option("--datasets", bb_datasets, "file of 'name, meta_domain[, split]' lines")
      ->required();
  bb->add_option("--name", bb_name, "benchmark name");
  bb->add_option("--source-domain", bb_source, "meta-training domain");
  bb->add_option("--target-domain", bb_target, "meta-testing domain");
  bb->add_option("--dev", bb_dev, "dev task count");
  bb->add_option("--test", bb_test, "test task count (same-domain benchmarks)");

  // spectra: --out is the spectrum file itself, so it skips the common set
  CommonFlags sp_flags;
  std::string sp_dataset, sp_name, sp_kind = "ppr", sp_out;
  double sp_alpha = 0.2, sp_t = 5.0;
  int sp_k = 128;
  auto* sp = app.add_subcommand("spectra", "diffusion spectra for every graph of a dataset");
  sp->add_option("--config", sp_flags.config_path, "key-value configuration file");
  sp->add_option("--seed", sp_flags.seed, "master seed override");
  sp->add_option("--dataset", sp_dataset, "dataset directory (flat-file layout)")->required();
  sp->add_option("--name", sp_name, "dataset name (default: directory basename)");
  sp->add_option("--kind", sp_kind, "ppr | heat");
  sp->add_option("--alpha", sp_alpha, "PPR teleport probability");
  sp->add_option("--t", sp_t, "heat diffusion time");
  sp->add_option("--k", sp_k, "spectrum length");
  sp->add_option("--out", sp_out, "output file")->required();

  // train
  CommonFlags tr_flags;
  std::string tr_manifest;
  bool tr_synth = false;
  auto* tr = app.add_subcommand("train", "meta-train the encoder");
  add_common(tr, tr_flags);
  tr->add_option("--benchmark", tr_manifest, "benchmark manifest JSON");
  tr->add_flag("--synthetic", tr_synth, "use the built-in synthetic suite");

  // eval
  CommonFlags ev_flags;
  std::string ev_manifest, ev_checkpoint;
  bool ev_synth = false;
  std::optional<int> ev_runs;
  auto* ev = app.add_subcommand("eval", "meta-test a trained checkpoint");
  add_common(ev, ev_flags);
  ev->add_option("--benchmark", ev_manifest, "benchmark manifest JSON");
  ev->add_flag("--synthetic", ev_synth, "use the built-in synthetic suite");
  ev->add_option("--checkpoint", ev_checkpoint, "trained model checkpoint")->required();
  ev->add_option("--runs", ev_runs, "evaluation runs");

  // ablate
  CommonFlags ab_flags;
  std::string ab_manifest;
  bool ab_synth = false;
  auto* ab = app.add_subcommand("ablate", "train and evaluate the four view sets");
  add_common(ab, ab_flags);
  ab->add_option("--benchmark", ab_manifest, "benchmark manifest JSON");
  ab->add_flag("--synthetic", ab_synth, "use the built-in synthetic suite");

  // verify
  bool vf_quick = false;
  std::uint64_t vf_seed = 0;
  auto* vf = app.add_subcommand("verify", "run the property suites");
  vf->add_flag("--quick", vf_quick, "smaller sample counts");
  vf->add_option("--seed", vf_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bb->parsed())
      return cmd_benchbuild(bb_flags, bb_datasets, bb_name, bb_source, bb_target, bb_dev,
                            bb_test);
    if (sp->parsed())
      return cmd_spectra(sp_flags, sp_dataset, sp_name, sp_kind, sp_alpha, sp_t, sp_k, sp_out);
    if (tr->parsed())
      return cmd_train(tr_flags, tr_synth, tr_manifest);
    if (ev->parsed())
      return cmd_eval(ev_flags, ev_synth, ev_manifest, ev_checkpoint, ev_runs);
    if (ab->parsed())
      return cmd_ablate(ab_flags, ab_synth, ab_manifest);
    if (vf->parsed())
      return cmd_verify(vf_quick, vf_seed);
  } catch (const Error& e) {
    const int code = e.code() == Errc::config ? 2 : 1;
    std::cerr << nlohmann::ordered_json{{"error", e.what()}, {"exit_code", code}}.dump()
              << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::ordered_json{{"error", e.what()}, {"exit_code", 1}}.dump() << "\n";
    return 1;
  }
  return 2;
}

} // namespace metaview
