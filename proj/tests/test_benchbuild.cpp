#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "bench_fixture.hpp"
#include "test_util.hpp"

using namespace metaview;
using namespace metaview::testutil;

namespace {

SourceDataset synthetic_source(const std::string& name, int count, int classes,
                               std::uint64_t seed) {
  SourceDataset ds;
  ds.name = name;
  ds.meta_domain = "molecules";
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    SynthParams p;
    p.n = rng.uniform_int(4, 8);
    Graph g = synth_graph(SynthFamily::tree, p, rng.next_u64());
    g.label = i % classes;
    g.origin_id = i;
    ds.graphs.push_back(std::move(g));
  }
  return ds;
}

std::set<std::int64_t> all_ids(const TaskManifest& t) {
  std::set<std::int64_t> ids;
  for (const auto& side : {t.support_ids, t.query_ids})
    for (const auto& cls : side)
      ids.insert(cls.begin(), cls.end());
  return ids;
}

} // namespace

TEST_CASE("split_multitask") {
  SUBCASE("T=1 wraps the dataset as a single task") {
    SourceDataset ds = synthetic_source("one", 200, 2, 1);
    Eigen::MatrixXi labels(200, 1);
    for (int i = 0; i < 200; ++i)
      labels(i, 0) = i % 2;
    ds.multitask = labels;
    auto tasks = split_multitask(ds, 0, nullptr);
    REQUIRE(tasks.size() == 1);
    CHECK(tasks[0].members[0].size() + tasks[0].members[1].size() == 200);
  }
  SUBCASE("T=2 over 400 graphs gives two disjoint ~200-graph datasets") {
    SourceDataset ds = synthetic_source("two", 400, 2, 2);
    Eigen::MatrixXi labels(400, 2);
    for (int i = 0; i < 400; ++i) {
      labels(i, 0) = i % 2;
      labels(i, 1) = (i / 2) % 2;
    }
    ds.multitask = labels;
    auto tasks = split_multitask(ds, 7, nullptr);
    REQUIRE(tasks.size() == 2);
    std::set<std::int64_t> seen;
    std::size_t total = 0;
    for (const auto& t : tasks) {
      for (int cls = 0; cls < 2; ++cls) {
        total += t.members[cls].size();
        for (auto id : t.members[cls])
          CHECK(seen.insert(id).second); // no sharing
      }
    }
    CHECK(total == 400);
    CHECK(tasks[0].members[0].size() + tasks[0].members[1].size() == 200);
  }
  SUBCASE("starved columns are skipped with a warning") {
    SourceDataset ds = synthetic_source("starved", 100, 2, 3);
    Eigen::MatrixXi labels(100, 2);
    for (int i = 0; i < 100; ++i) {
      labels(i, 0) = i % 2;
      labels(i, 1) = -1; // column 1 has no usable samples
    }
    ds.multitask = labels;
    std::vector<std::string> warnings;
    auto tasks = split_multitask(ds, 0, &warnings);
    CHECK(tasks.size() <= 1);
    CHECK_FALSE(warnings.empty());
  }
  SUBCASE("deterministic in the seed") {
    SourceDataset ds = synthetic_source("det", 400, 2, 3);
    Eigen::MatrixXi labels(400, 2);
    for (int i = 0; i < 400; ++i) {
      labels(i, 0) = i % 2;
      labels(i, 1) = (i / 2) % 2;
    }
    ds.multitask = labels;
    auto a = split_multitask(ds, 5, nullptr);
    auto b = split_multitask(ds, 5, nullptr);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].members[0] == b[i].members[0]);
      CHECK(a[i].members[1] == b[i].members[1]);
    }
  }
}

TEST_CASE("split_multiclass") {
  SUBCASE("six classes pair into three binary datasets") {
    SourceDataset ds = synthetic_source("six", 6 * 71, 6, 4);
    auto tasks = split_multiclass(ds, 3, nullptr);
    CHECK(tasks.size() == 3);
    std::set<int> used;
    for (const auto& t : tasks) {
      CHECK(used.insert(t.class_pair[0]).second);
      CHECK(used.insert(t.class_pair[1]).second);
    }
  }
  SUBCASE("three classes give one task, one class unused") {
    SourceDataset ds = synthetic_source("three", 3 * 71, 3, 5);
    auto tasks = split_multiclass(ds, 1, nullptr);
    CHECK(tasks.size() == 1);
  }
  SUBCASE("same seed gives identical pairing") {
    SourceDataset ds = synthetic_source("pair", 6 * 71, 6, 6);
    auto a = split_multiclass(ds, 9, nullptr);
    auto b = split_multiclass(ds, 9, nullptr);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i].class_pair == b[i].class_pair);
  }
  SUBCASE("small classes are skipped with warnings") {
    SourceDataset ds = synthetic_source("small", 3 * 71, 3, 7);
    // shrink one class below 70
    std::vector<Graph> kept;
    int dropped = 0;
    for (auto& g : ds.graphs) {
      if (g.label == 2 && dropped < 30) {
        ++dropped;
        continue;
      }
      kept.push_back(std::move(g));
    }
    ds.graphs = std::move(kept);
    std::vector<std::string> warnings;
    auto tasks = split_multiclass(ds, 12, &warnings);
    CHECK(tasks.size() + warnings.size() >= 1);
  }
}

TEST_CASE("build_task") {
  SourceDataset ds = synthetic_source("bt", 140, 2, 8);
  auto singles = single_task_datasets(ds, 0, nullptr);
  REQUIRE(singles.size() == 1);

  SUBCASE("exactly 70 per class consumes everything") {
    TaskManifest manifest = build_task(singles[0], 0);
    CHECK(manifest.support_ids[0].size() == 20);
    CHECK(manifest.support_ids[1].size() == 20);
    CHECK(manifest.query_ids[0].size() == 50);
    CHECK(manifest.query_ids[1].size() == 50);
    CHECK(all_ids(manifest).size() == 140);
  }
  SUBCASE("same seed twice gives identical manifests") {
    TaskManifest a = build_task(singles[0], 5);
    TaskManifest b = build_task(singles[0], 5);
    CHECK(a.support_ids == b.support_ids);
    CHECK(a.query_ids == b.query_ids);
  }
  SUBCASE("insufficient samples fail") {
    SingleTaskDataset starved = singles[0];
    starved.members[1].resize(69);
    CHECK_THROWS_AS(build_task(starved, 0), Error);
  }
}

TEST_CASE("assemble_benchmark") {
  auto make_tasks = [](const std::string& origin, int count) {
    std::vector<TaskManifest> tasks;
    for (int i = 0; i < count; ++i) {
      TaskManifest t;
      t.task_id = origin + "#t" + std::to_string(i);
      t.source_dataset = origin;
      t.meta_domain = "molecules";
      tasks.push_back(std::move(t));
    }
    return tasks;
  };

  SUBCASE("origin-atomic allocation hits the requested counts") {
    std::vector<TaskManifest> source;
    for (const auto& [origin, n] :
         std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 3}, {"d", 2}}) {
      auto tasks = make_tasks(origin, n);
      source.insert(source.end(), tasks.begin(), tasks.end());
    }
    BenchmarkManifest manifest =
        assemble_benchmark(source, {}, "bench", "molecules", "molecules", 3,
                           AssembleOptions{.dev_tasks = 1, .test_tasks = 2});
    CHECK(manifest.dev.size() == 1);
    CHECK(manifest.test.size() == 2);
    CHECK(manifest.train.size() == 4);
    validate_benchmark(manifest);
  }
  SUBCASE("one origin owning everything cannot satisfy three splits") {
    auto source = make_tasks("solo", 7);
    CHECK_THROWS_WITH_AS(
        assemble_benchmark(source, {}, "bench", "molecules", "molecules", 0,
                           AssembleOptions{.dev_tasks = 2, .test_tasks = 2}),
        doctest::Contains("solo"), Error);
  }
  SUBCASE("pinned origins are honored") {
    std::vector<TaskManifest> source;
    for (const auto& [origin, n] :
         std::vector<std::pair<std::string, int>>{{"a", 2}, {"b", 1}, {"c", 2}}) {
      auto tasks = make_tasks(origin, n);
      source.insert(source.end(), tasks.begin(), tasks.end());
    }
    AssembleOptions options;
    options.dev_tasks = 1;
    options.origin_splits["a"] = Split::test;
    BenchmarkManifest manifest =
        assemble_benchmark(source, {}, "bench", "molecules", "molecules", 1, options);
    for (const auto& id : manifest.test)
      CHECK(id.substr(0, 1) == "a");
    CHECK(manifest.dev.size() == 1);
  }
}

TEST_CASE("six-dataset fixture matches the hand-derived expectation") {
  TempDir dir("benchfix");
  write_bench_fixture(dir.path());
  BenchmarkManifest manifest = build_fixture_benchmark(dir.path(), 11);

  BenchFixtureExpect expect =
      read_bench_expect(std::filesystem::path(METAVIEW_FIXTURE_DIR) / "bench_expect.json");

  std::map<std::string, int> per_dataset;
  for (const auto& t : manifest.tasks)
    per_dataset[t.source_dataset] += 1;
  CHECK(per_dataset == expect.tasks_per_dataset);
  CHECK(static_cast<int>(manifest.train.size()) == expect.train);
  CHECK(static_cast<int>(manifest.dev.size()) == expect.dev);
  CHECK(static_cast<int>(manifest.test.size()) == expect.test);
  CHECK(manifest.warnings.empty());

  // consistency scans
  validate_benchmark(manifest);

  // bioinformatics tasks all land in test
  std::set<std::string> test_ids(manifest.test.begin(), manifest.test.end());
  for (const auto& t : manifest.tasks)
    if (t.meta_domain == "bioinformatics")
      CHECK(test_ids.count(t.task_id));

  SUBCASE("rebuild is deterministic with a stable hash") {
    BenchmarkManifest again = build_fixture_benchmark(dir.path(), 11);
    CHECK(benchmark_to_json(manifest) == benchmark_to_json(again));
    CHECK(benchmark_hash(manifest) == benchmark_hash(again));
    BenchmarkManifest other = build_fixture_benchmark(dir.path(), 12);
    CHECK(benchmark_hash(manifest) != benchmark_hash(other));
  }
  SUBCASE("JSON round trip preserves everything") {
    BenchmarkManifest loaded = benchmark_from_json(benchmark_to_json(manifest));
    CHECK(benchmark_to_json(loaded) == benchmark_to_json(manifest));
  }
  SUBCASE("episodes rebuilt from the manifest match the stored memberships") {
    ViewConfig views;
    views.d_pad = 16; // fixture graphs carry the 16-wide all-ones features
    views.d_u = 4;
    views.d_z = 8;
    DatasetBundles data;
    for (const auto& name : {"epsil", "zeta"}) {
      SourceDataset ds = load_source_dataset(dir.path() / name, name, "bioinformatics");
      data[name] = index_dataset(ds, views);
    }
    auto tasks = tasks_from_manifest(manifest, manifest.test, data);
    REQUIRE(tasks.size() == manifest.test.size());
    std::map<std::string, const TaskManifest*> by_id;
    for (const auto& t : manifest.tasks)
      by_id[t.task_id] = &t;
    for (const auto& task : tasks) {
      const TaskManifest& m = *by_id.at(task.task_id);
      for (int cls = 0; cls < 2; ++cls) {
        REQUIRE(task.support_pool[cls].size() == m.support_ids[cls].size());
        for (std::size_t i = 0; i < m.support_ids[cls].size(); ++i)
          CHECK(task.support_pool[cls][i].origin_id == m.support_ids[cls][i]);
        for (std::size_t i = 0; i < m.query_ids[cls].size(); ++i)
          CHECK(task.query_pool[cls][i].origin_id == m.query_ids[cls][i]);
      }
    }
  }
}
