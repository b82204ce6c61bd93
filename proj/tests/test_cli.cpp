#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "bench_fixture.hpp"
#include "metaview/cli.hpp"
#include "metaview/config.hpp"
#include "test_util.hpp"

using namespace metaview;
using namespace metaview::testutil;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"metaview"};
  for (const auto& a : args)
    argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
  SUBCASE("empty text yields the documented defaults") {
    RunConfig cfg = parse_config_text("");
    CHECK(cfg.encoder.d_h == 256);
    CHECK(cfg.views.d_u == 32);
    CHECK(cfg.views.d_z == 128);
    CHECK(cfg.views.alpha == doctest::Approx(0.2));
    CHECK(cfg.train.meta_batch == 16);
    CHECK(cfg.train.epochs == 1000);
    CHECK(cfg.train.patience == 30);
    CHECK(cfg.encoder.dropout_p == doctest::Approx(0.6));
    CHECK(cfg.eval.runs == 10);
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config_text("view.nope = 1\n"), doctest::Contains("view.nope"),
                         Error);
  }
  SUBCASE("comments and blank lines are fine") {
    RunConfig cfg = parse_config_text("# comment\n\nencoder.d_h = 64\n");
    CHECK(cfg.encoder.d_h == 64);
  }
  SUBCASE("hash changes with the config and is stable otherwise") {
    RunConfig a = parse_config_text("encoder.d_h = 64\n");
    RunConfig b = parse_config_text("encoder.d_h = 64\n");
    RunConfig c = parse_config_text("encoder.d_h = 128\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
  }
  SUBCASE("schema lists every key") {
    const std::string schema = RunConfig::schema();
    CHECK(schema.find("view.alpha") != std::string::npos);
    CHECK(schema.find("train.head") != std::string::npos);
    CHECK(schema.find("synth.pool_per_class") != std::string::npos);
  }
  SUBCASE("invalid values are config errors") {
    CHECK_THROWS_AS(parse_config_text("view.alpha = 1.5\n"), Error);
    CHECK_THROWS_AS(parse_config_text("encoder.gnn_layers = 4\n"), Error);
    CHECK_THROWS_AS(parse_config_text("train.head = nope\n"), Error);
  }
}

TEST_CASE("cli exit codes") {
  SUBCASE("missing config file exits 2") {
    CHECK(run_cli({"train", "--config", "missing.cfg", "--synthetic"}) == 2);
  }
  SUBCASE("unknown flag exits 2") { CHECK(run_cli({"train", "--frobnicate"}) == 2); }
  SUBCASE("verify --quick exits 0 and reports") {
    CHECK(run_cli({"verify", "--quick"}) == 0);
  }
}

TEST_CASE("spectra command writes 12-significant-digit lines") {
  TempDir dir("cli-spectra");
  // a tiny dataset in flat-file layout
  std::vector<Graph> graphs;
  Rng rng(5);
  for (int i = 0; i < 4; ++i) {
    SynthParams p;
    p.n = rng.uniform_int(3, 8);
    Graph g = synth_graph(SynthFamily::cycle, p, rng.next_u64());
    g.origin_id = i;
    graphs.push_back(std::move(g));
  }
  save_tudataset(graphs, dir.path() / "tiny", "tiny");

  const auto out_file = dir.path() / "spectra.txt";
  CHECK(run_cli({"spectra", "--dataset", (dir.path() / "tiny").string(), "--kind", "ppr",
                 "--alpha", "0.2", "--k", "6", "--out", out_file.string()}) == 0);

  std::ifstream in(out_file);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    // graph_id, then 6 spectrum entries
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
    // top eigenvalue of a connected graph is 1
    CHECK(line.find(", 1, ") != std::string::npos);
  }
  CHECK(lines == 4);
  CHECK(std::filesystem::exists(out_file.string() + ".meta.json"));

  SUBCASE("heat kernel spectra work through the same flags") {
    const auto heat_file = dir.path() / "heat.txt";
    CHECK(run_cli({"spectra", "--dataset", (dir.path() / "tiny").string(), "--kind", "heat",
                   "--t", "2.5", "--k", "4", "--out", heat_file.string()}) == 0);
    std::ifstream heat_in(heat_file);
    std::string first;
    REQUIRE(std::getline(heat_in, first));
    CHECK(first.find(", 1, ") != std::string::npos); // exp(0) tops the spectrum
  }
}

TEST_CASE("benchbuild + train + eval on the fixture") {
  TempDir dir("cli-pipeline");
  write_bench_fixture(dir.path());

  std::ofstream(dir.path() / "datasets.txt")
      << "alpha, molecules\nbeta, molecules\ngamma, molecules\ndelta, molecules\n"
      << "epsil, bioinformatics\nzeta, bioinformatics\n";

  // a desk-scale config so train/eval finish quickly
  std::ofstream(dir.path() / "run.cfg") << "encoder.d_h = 8\n"
                                           "encoder.gnn_layers = 1\n"
                                           "encoder.mlp_layers = 1\n"
                                           "encoder.dropout = 0.0\n"
                                           "encoder.fwt = off\n"
                                           "view.d_pad = 16\n"
                                           "view.d_u = 4\n"
                                           "view.d_z = 8\n"
                                           "train.epochs = 2\n"
                                           "train.shots = 2\n"
                                           "train.queries = 5\n"
                                           "train.meta_batch = 4\n"
                                           "train.adapt_steps = 3\n"
                                           "eval.runs = 2\n";

  const auto out = dir.path() / "out";
  CHECK(run_cli({"benchbuild", "--config", (dir.path() / "run.cfg").string(), "--data",
                 dir.path().string(), "--datasets", (dir.path() / "datasets.txt").string(),
                 "--name", "fixture", "--source-domain", "molecules", "--target-domain",
                 "bioinformatics", "--dev", "1", "--out", out.string(), "--seed", "11"}) ==
        0);
  const auto manifest_path = out / "fixture.json";
  REQUIRE(std::filesystem::exists(manifest_path));
  BenchmarkManifest manifest = load_benchmark(manifest_path);
  CHECK(manifest.train.size() == 5);
  CHECK(manifest.dev.size() == 1);
  CHECK(manifest.test.size() == 2);

  CHECK(run_cli({"train", "--config", (dir.path() / "run.cfg").string(), "--benchmark",
                 manifest_path.string(), "--data", dir.path().string(), "--out",
                 out.string(), "--seed", "3"}) == 0);
  REQUIRE(std::filesystem::exists(out / "model.ckpt"));
  REQUIRE(std::filesystem::exists(out / "history.json"));
  CHECK(slurp(out / "history.json").find("config_hash") != std::string::npos);

  CHECK(run_cli({"eval", "--config", (dir.path() / "run.cfg").string(), "--benchmark",
                 manifest_path.string(), "--data", dir.path().string(), "--checkpoint",
                 (out / "model.ckpt").string(), "--out", out.string(), "--seed", "3"}) == 0);
  REQUIRE(std::filesystem::exists(out / "metrics.json"));
  const std::string metrics = slurp(out / "metrics.json");
  CHECK(metrics.find("per_task") != std::string::npos);
  CHECK(metrics.find("aggregate") != std::string::npos);
  CHECK(metrics.find("config_hash") != std::string::npos);
}

TEST_CASE("train and eval on the built-in synthetic suite") {
  TempDir dir("cli-synth");
  std::ofstream(dir.path() / "run.cfg") << "encoder.d_h = 8\n"
                                           "encoder.gnn_layers = 1\n"
                                           "encoder.mlp_layers = 1\n"
                                           "encoder.dropout = 0.0\n"
                                           "encoder.fwt = off\n"
                                           "view.d_pad = 16\n"
                                           "view.d_u = 4\n"
                                           "view.d_z = 8\n"
                                           "train.epochs = 2\n"
                                           "train.shots = 2\n"
                                           "train.queries = 4\n"
                                           "synth.train_tasks = 2\n"
                                           "synth.dev_tasks = 1\n"
                                           "synth.test_tasks = 2\n"
                                           "synth.pool_per_class = 8\n"
                                           "eval.runs = 2\n"
                                           "eval.queries = 4\n";
  const auto out = dir.path() / "out";
  CHECK(run_cli({"train", "--config", (dir.path() / "run.cfg").string(), "--synthetic",
                 "--out", out.string(), "--seed", "5"}) == 0);
  REQUIRE(std::filesystem::exists(out / "model.ckpt"));
  REQUIRE(std::filesystem::exists(out / "model.ckpt.meta.json"));
  CHECK(run_cli({"eval", "--config", (dir.path() / "run.cfg").string(), "--synthetic",
                 "--checkpoint", (out / "model.ckpt").string(), "--out", out.string(),
                 "--seed", "5"}) == 0);
  const std::string metrics = slurp(out / "metrics.json");
  CHECK(metrics.find("\"benchmark\": \"synthetic\"") != std::string::npos);

  SUBCASE("re-running eval reproduces metrics byte-for-byte") {
    const auto out2 = dir.path() / "out2";
    CHECK(run_cli({"eval", "--config", (dir.path() / "run.cfg").string(), "--synthetic",
                   "--checkpoint", (out / "model.ckpt").string(), "--out", out2.string(),
                   "--seed", "5"}) == 0);
    CHECK(slurp(out2 / "metrics.json") == metrics);
  }
}

TEST_CASE("ablate runs the four view sets under one seed") {
  TempDir dir("cli-ablate");
  std::ofstream(dir.path() / "run.cfg") << "encoder.d_h = 8\n"
                                           "encoder.gnn_layers = 1\n"
                                           "encoder.mlp_layers = 1\n"
                                           "encoder.dropout = 0.0\n"
                                           "encoder.fwt = off\n"
                                           "view.d_pad = 16\n"
                                           "view.d_u = 4\n"
                                           "view.d_z = 8\n"
                                           "train.epochs = 2\n"
                                           "train.shots = 2\n"
                                           "train.queries = 4\n"
                                           "synth.train_tasks = 2\n"
                                           "synth.dev_tasks = 1\n"
                                           "synth.test_tasks = 2\n"
                                           "synth.pool_per_class = 8\n"
                                           "eval.runs = 1\n"
                                           "eval.queries = 4\n";
  const auto out = dir.path() / "out";
  CHECK(run_cli({"ablate", "--config", (dir.path() / "run.cfg").string(), "--synthetic",
                 "--out", out.string(), "--seed", "1"}) == 0);
  const std::string table = slurp(out / "ablation.txt");
  CHECK(table.find("x,u,z") != std::string::npos);
  CHECK(table.find("x,z") != std::string::npos);
  const std::string json = slurp(out / "ablation.json");
  CHECK(json.find("\"seed\": 1") != std::string::npos);
}
