#ifndef METAVIEW_SYNTHBENCH_HPP_
#define METAVIEW_SYNTHBENCH_HPP_

#include "metaview/episode.hpp"
#include "metaview/synth.hpp"

namespace metaview {

/// Desk-scale cross-domain transfer suite. Meta-train and dev tasks separate
/// cycles from random trees over 8-dimensional random node features;
/// meta-test tasks separate stars from Barabasi-Albert graphs over
/// 16-dimensional random features, so source and target differ in both
/// topology families and feature-space width.
struct SynthSuiteConfig {
  int train_tasks = 12;
  int dev_tasks = 4;
  int test_tasks = 6;
  int pool_per_class = 70; // serves up to 20-shot episodes with 50 queries
  Eigen::Index train_feature_dim = 8;
  Eigen::Index test_feature_dim = 16;
  std::int64_t min_nodes = 8;
  std::int64_t max_nodes = 20;
  std::uint64_t seed = 0;
};

struct SynthSuite {
  std::vector<TaskData> train;
  std::vector<TaskData> dev;
  std::vector<TaskData> test;
};

SynthSuite build_synth_suite(const SynthSuiteConfig& cfg, const ViewConfig& views);

/// A single trivially-separable 2-way task (stars vs cycles) used as the
/// overfit fixture.
TaskData build_overfit_task(const ViewConfig& views, std::uint64_t seed);

} // namespace metaview

#endif // METAVIEW_SYNTHBENCH_HPP_
