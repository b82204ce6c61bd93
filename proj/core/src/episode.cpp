#include "metaview/episode.hpp"

#include <algorithm>

#include "metaview/rng.hpp"

namespace metaview {

namespace {

void append_members(std::vector<EpisodeMember>& out, const std::vector<TaskSample>& pool,
                    const std::vector<std::size_t>& picks, int label) {
  for (std::size_t i : picks)
    out.push_back({pool[i].bundle, label, pool[i].origin_id});
}

[[noreturn]] void too_small(const TaskData& task, int class_label, std::size_t have,
                            std::size_t need) {
  fail(Errc::episode, "task " + task.task_id + ": class " + std::to_string(class_label) +
                          " holds " + std::to_string(have) + " samples, episode needs " +
                          std::to_string(need));
}

} // namespace

Episode sample_episode(const TaskData& task, int k, int n, int m, std::uint64_t seed) {
  if (k < 2 || n < 1 || m < 1)
    fail(Errc::episode, "episode needs k >= 2, n >= 1, m >= 1");
  if (task.num_classes() < k)
    fail(Errc::episode, "task " + task.task_id + " has " +
                            std::to_string(task.num_classes()) + " classes, needs " +
                            std::to_string(k));

  Rng rng(seed);
  // class subset in first-appearance order
  std::vector<std::size_t> class_idx;
  if (task.num_classes() == k) {
    for (int j = 0; j < k; ++j)
      class_idx.push_back(static_cast<std::size_t>(j));
  } else {
    class_idx = rng.sample_indices(static_cast<std::size_t>(task.num_classes()),
                                   static_cast<std::size_t>(k));
    std::sort(class_idx.begin(), class_idx.end());
  }

  Episode ep;
  ep.way = k;
  ep.shots = n;
  ep.queries = m;
  ep.task_id = task.task_id;
  ep.seed = seed;

  for (int j = 0; j < k; ++j) {
    const std::size_t ci = class_idx[static_cast<std::size_t>(j)];
    const int original_label = task.class_labels[ci];
    if (task.presplit()) {
      const auto& sup = task.support_pool[ci];
      const auto& qry = task.query_pool[ci];
      if (sup.size() < static_cast<std::size_t>(n))
        too_small(task, original_label, sup.size(), static_cast<std::size_t>(n));
      if (qry.size() < static_cast<std::size_t>(m))
        too_small(task, original_label, qry.size(), static_cast<std::size_t>(m));
      append_members(ep.support, sup, rng.sample_indices(sup.size(), static_cast<std::size_t>(n)),
                     j);
      append_members(ep.query, qry, rng.sample_indices(qry.size(), static_cast<std::size_t>(m)),
                     j);
    } else {
      const auto& pool = task.pool[ci];
      const std::size_t need = static_cast<std::size_t>(n) + static_cast<std::size_t>(m);
      if (pool.size() < need)
        too_small(task, original_label, pool.size(), need);
      auto picks = rng.sample_indices(pool.size(), need);
      append_members(ep.support, pool,
                     {picks.begin(), picks.begin() + static_cast<std::ptrdiff_t>(n)}, j);
      append_members(ep.query, pool,
                     {picks.begin() + static_cast<std::ptrdiff_t>(n), picks.end()}, j);
    }
  }
  return ep;
}

} // namespace metaview
