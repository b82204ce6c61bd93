#include "metaview/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace metaview {

void EvalConfig::validate() const {
  if (runs < 1 || way < 2 || shots < 1 || queries < 1)
    fail(Errc::config, "evaluation needs runs >= 1, way >= 2, shots >= 1, queries >= 1");
  if (adapt_steps < 0 || adapt_lr <= 0.0)
    fail(Errc::config, "adaptation schedule invalid");
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double stdev = 0.0;
};

MeanStd population_stats(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty())
    return out;
  for (double x : xs)
    out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs)
    sq += (x - out.mean) * (x - out.mean);
  out.stdev = std::sqrt(sq / static_cast<double>(xs.size()));
  return out;
}

} // namespace

EvalReport evaluate(const std::vector<TaskData>& test_tasks, const ModelParams& model,
                    const EncoderConfig& enc_cfg, HeadKind head, const EvalConfig& cfg) {
  cfg.validate();
  if (test_tasks.empty())
    fail(Errc::episode, "evaluate requires at least one task");
  const Mlp* relation = model.has_relation ? &model.relation : nullptr;

  EvalReport report;
  report.head = to_string(head);
  report.shots = cfg.shots;

  // accuracy matrix [task][run]
  std::vector<std::vector<double>> acc(test_tasks.size(),
                                       std::vector<double>(cfg.runs, 0.0));
  for (int run = 0; run < cfg.runs; ++run)
    report.run_seeds.push_back(Rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(run)));

  const std::size_t cells = test_tasks.size() * static_cast<std::size_t>(cfg.runs);
  parallel_for(cells, cfg.jobs, [&](std::size_t cell) {
    const std::size_t ti = cell / static_cast<std::size_t>(cfg.runs);
    const int run = static_cast<int>(cell % static_cast<std::size_t>(cfg.runs));
    const TaskData& task = test_tasks[ti];

    int m = cfg.queries;
    if (task.presplit()) {
      std::size_t pool_min = task.query_pool[0].size();
      for (const auto& pool : task.query_pool)
        pool_min = std::min(pool_min, pool.size());
      m = static_cast<int>(pool_min);
    }
    const std::uint64_t ep_seed = Rng::derive_seed(report.run_seeds[run], ti);
    Episode ep = sample_episode(task, cfg.way, cfg.shots, m, ep_seed);
    Rng unused(0);
    EncodedEpisode enc = encode_episode(ep, model.encoder, enc_cfg, Mode::eval, unused);

    std::vector<int> preds;
    if (cfg.use_cosine_adapt) {
      CosineClassifier clf = cosine_adapt(enc.h_support.value(), enc.y_support, cfg.way,
                                          cfg.adapt_steps, cfg.adapt_lr, cfg.tau);
      preds = head_predictions(cosine_logits(clf, enc.h_query.value()));
    } else {
      preds = head_predictions(episode_head_output(enc, head, cfg.way, relation).value());
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
      correct += preds[i] == enc.y_query[i] ? 1u : 0u;
    acc[ti][run] = static_cast<double>(correct) / static_cast<double>(preds.size());
  });

  std::vector<double> all;
  for (std::size_t ti = 0; ti < test_tasks.size(); ++ti) {
    MeanStd s = population_stats(acc[ti]);
    report.per_task.push_back({test_tasks[ti].task_id, s.mean, s.stdev});
    all.insert(all.end(), acc[ti].begin(), acc[ti].end());
  }
  MeanStd agg = population_stats(all);
  report.mean = agg.mean;
  report.stdev = agg.stdev;
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["version"] = kToolVersion;
  doc["benchmark"] = report.benchmark;
  doc["head"] = report.head;
  doc["shots"] = report.shots;
  doc["per_task"] = nlohmann::ordered_json::array();
  for (const auto& t : report.per_task)
    doc["per_task"].push_back({{"task_id", t.task_id}, {"mean", t.mean}, {"std", t.stdev}});
  doc["aggregate"] = {{"mean", report.mean}, {"std", report.stdev}};
  doc["seeds"] = report.run_seeds;
  doc["config_hash"] = report.config_hash;
  return doc.dump(2) + "\n";
}

std::string eval_report_table(const EvalReport& report) {
  std::size_t width = std::string("aggregate").size();
  for (const auto& t : report.per_task)
    width = std::max(width, t.task_id.size());
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-*s  %8s  %8s\n", static_cast<int>(width), "task",
                "mean", "std");
  out << line;
  for (const auto& t : report.per_task) {
    std::snprintf(line, sizeof(line), "%-*s  %8.4f  %8.4f\n", static_cast<int>(width),
                  t.task_id.c_str(), t.mean, t.stdev);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-*s  %8.4f  %8.4f\n", static_cast<int>(width),
                "aggregate", report.mean, report.stdev);
  out << line;
  return out.str();
}

} // namespace metaview
