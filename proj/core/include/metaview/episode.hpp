#ifndef METAVIEW_EPISODE_HPP_
#define METAVIEW_EPISODE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "metaview/views.hpp"

namespace metaview {

struct TaskSample {
  std::shared_ptr<const ViewBundle> bundle;
  std::int64_t origin_id = -1;
};

/// One task's sample pools, views precomputed. Classes keep their original
/// labels; pools are indexed by class position. When support/query pools are
/// present (tasks rebuilt from a benchmark manifest) episodes draw support
/// from the support pool and queries from the query pool; otherwise both
/// sides are drawn disjointly from the single pool.
struct TaskData {
  std::string task_id;
  std::string meta_domain;
  std::vector<int> class_labels; // original labels, first-appearance order
  std::vector<std::vector<TaskSample>> pool;
  std::vector<std::vector<TaskSample>> support_pool;
  std::vector<std::vector<TaskSample>> query_pool;

  bool presplit() const { return !support_pool.empty(); }
  int num_classes() const { return static_cast<int>(class_labels.size()); }
};

struct EpisodeMember {
  std::shared_ptr<const ViewBundle> bundle;
  int label = 0; // remapped class index in [0, way)
  std::int64_t origin_id = -1;
};

/// One k-way n-shot task instance.
struct Episode {
  int way = 2;
  int shots = 5;
  int queries = 50; // per class
  std::vector<EpisodeMember> support; // way * shots entries, class-major
  std::vector<EpisodeMember> query;   // way * queries entries, class-major
  std::string task_id;
  std::uint64_t seed = 0;
};

/// Uniform sampling without replacement per class, deterministic in `seed`.
/// Classes are remapped to 0..k-1 in first-appearance order; when the task
/// has more than k classes a seeded k-subset is drawn first. Throws
/// Errc::episode naming the class when a pool is too small.
Episode sample_episode(const TaskData& task, int k, int n, int m, std::uint64_t seed);

} // namespace metaview

#endif // METAVIEW_EPISODE_HPP_
