#ifndef METAVIEW_TESTS_BENCH_FIXTURE_HPP_
#define METAVIEW_TESTS_BENCH_FIXTURE_HPP_

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "metaview/benchbuild.hpp"
#include "metaview/rng.hpp"
#include "metaview/synth.hpp"

namespace metaview::testutil {

/// Writes the six-dataset desk-scale corpus in flat-file layout:
///   alpha  molecules       binary           -> 1 task
///   beta   molecules       binary           -> 1 task
///   gamma  molecules       4 classes        -> 2 tasks
///   delta  molecules       2-column multi-task sidecar -> 2 tasks
///   epsil  bioinformatics  binary           -> 1 task
///   zeta   bioinformatics  3 classes        -> 1 task
/// All graphs are small connected trees/cycles that survive the default
/// filters; class populations stay at or above 70 after any seeded split.
inline void write_bench_fixture(const std::filesystem::path& root) {
  Rng rng(0xf1c5);

  auto make_graphs = [&](int count, int classes) {
    std::vector<Graph> graphs;
    for (int i = 0; i < count; ++i) {
      SynthParams p;
      p.n = rng.uniform_int(4, 9);
      Graph g = synth_graph(i % 2 == 0 ? SynthFamily::tree : SynthFamily::cycle, p,
                            rng.next_u64());
      g.label = i % classes; // perfectly balanced classes
      g.origin_id = i;
      graphs.push_back(std::move(g));
    }
    return graphs;
  };

  auto write = [&](const std::string& name, int count, int classes) {
    save_tudataset(make_graphs(count, classes), root / name, name);
  };

  write("alpha", 150, 2); // 75 per class
  write("beta", 144, 2);  // 72 per class
  write("gamma", 284, 4); // 71 per class
  write("epsil", 140, 2); // 70 per class, exact boundary
  write("zeta", 213, 3);  // 71 per class

  // delta: binary labels in two sidecar columns; the balanced partition
  // leaves ~150 graphs per column, ~75 per class
  const int delta_count = 300;
  save_tudataset(make_graphs(delta_count, 2), root / "delta", "delta");
  std::ofstream sidecar(root / "delta" / "delta_task_labels.txt");
  for (int i = 0; i < delta_count; ++i)
    sidecar << i % 2 << ", " << (i / 2) % 2 << "\n";
}

struct BenchFixtureExpect {
  std::map<std::string, int> tasks_per_dataset;
  int train = 0, dev = 0, test = 0;
};

/// Reads the hand-derived expectation file.
inline BenchFixtureExpect read_bench_expect(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    fail(Errc::ingest, "missing expectation file: " + file.string());
  nlohmann::json doc = nlohmann::json::parse(in);
  BenchFixtureExpect out;
  for (const auto& [name, count] : doc.at("tasks_per_dataset").items())
    out.tasks_per_dataset[name] = count.get<int>();
  out.train = doc.at("splits").at("train").get<int>();
  out.dev = doc.at("splits").at("dev").get<int>();
  out.test = doc.at("splits").at("test").get<int>();
  return out;
}

/// Library-level pipeline mirroring `metaview benchbuild` on the fixture.
inline BenchmarkManifest build_fixture_benchmark(const std::filesystem::path& root,
                                                 std::uint64_t seed) {
  const std::vector<DatasetListing> listing = {
      {"alpha", "molecules", {}}, {"beta", "molecules", {}},
      {"gamma", "molecules", {}}, {"delta", "molecules", {}},
      {"epsil", "bioinformatics", {}}, {"zeta", "bioinformatics", {}}};
  AssembleOptions options;
  options.dev_tasks = 1;
  return build_benchmark_from_listing(listing, root, "fixture", "molecules",
                                      "bioinformatics", seed, options);
}

} // namespace metaview::testutil

#endif // METAVIEW_TESTS_BENCH_FIXTURE_HPP_
