#include "metaview/synthbench.hpp"

#include "metaview/rng.hpp"

namespace metaview {

namespace {

TaskData build_family_task(const std::string& task_id, SynthFamily class0, SynthFamily class1,
                           Eigen::Index feature_dim, int pool_per_class, std::int64_t min_nodes,
                           std::int64_t max_nodes, const ViewConfig& views, std::uint64_t seed) {
  TaskData task;
  task.task_id = task_id;
  task.class_labels = {0, 1};
  task.pool.resize(2);
  Rng rng(seed);
  const SynthFamily families[2] = {class0, class1};
  for (int cls = 0; cls < 2; ++cls) {
    for (int i = 0; i < pool_per_class; ++i) {
      SynthParams params;
      params.n = rng.uniform_int(min_nodes, max_nodes);
      params.m = 2;
      params.features = SynthFeatures::gaussian;
      params.feature_dim = feature_dim;
      const std::uint64_t graph_seed = rng.next_u64();
      Graph g = synth_graph(families[cls], params, graph_seed);
      g.label = cls;
      g.origin_id = cls * pool_per_class + i;
      auto bundle = std::make_shared<const ViewBundle>(build_views(g, views));
      task.pool[static_cast<std::size_t>(cls)].push_back({bundle, g.origin_id});
    }
  }
  return task;
}

} // namespace

SynthSuite build_synth_suite(const SynthSuiteConfig& cfg, const ViewConfig& views) {
  if (cfg.min_nodes < 3 || cfg.max_nodes < cfg.min_nodes)
    fail(Errc::config, "synthetic suite needs 3 <= min_nodes <= max_nodes");
  SynthSuite suite;
  Rng rng(Rng::derive_seed(cfg.seed, 0x5b17ULL));
  for (int i = 0; i < cfg.train_tasks; ++i)
    suite.train.push_back(build_family_task("synth-train-" + std::to_string(i),
                                            SynthFamily::cycle, SynthFamily::tree,
                                            cfg.train_feature_dim, cfg.pool_per_class,
                                            cfg.min_nodes, cfg.max_nodes, views,
                                            rng.next_u64()));
  for (int i = 0; i < cfg.dev_tasks; ++i)
    suite.dev.push_back(build_family_task("synth-dev-" + std::to_string(i),
                                          SynthFamily::cycle, SynthFamily::tree,
                                          cfg.train_feature_dim, cfg.pool_per_class,
                                          cfg.min_nodes, cfg.max_nodes, views,
                                          rng.next_u64()));
  for (int i = 0; i < cfg.test_tasks; ++i)
    suite.test.push_back(build_family_task("synth-test-" + std::to_string(i),
                                           SynthFamily::star, SynthFamily::barabasi_albert,
                                           cfg.test_feature_dim, cfg.pool_per_class,
                                           cfg.min_nodes, cfg.max_nodes, views,
                                           rng.next_u64()));
  return suite;
}

TaskData build_overfit_task(const ViewConfig& views, std::uint64_t seed) {
  // pre-split pools sized for one fixed 5-shot 15-query episode, so every
  // epoch re-trains on the same membership
  TaskData task = build_family_task("synth-overfit", SynthFamily::star, SynthFamily::cycle, 8,
                                    20, 8, 16, views, Rng::derive_seed(seed, 0x0f17ULL));
  task.support_pool.resize(2);
  task.query_pool.resize(2);
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const auto& pool = task.pool[cls];
    task.support_pool[cls].assign(pool.begin(), pool.begin() + 5);
    task.query_pool[cls].assign(pool.begin() + 5, pool.end());
  }
  return task;
}

} // namespace metaview
