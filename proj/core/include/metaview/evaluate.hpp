#ifndef METAVIEW_EVALUATE_HPP_
#define METAVIEW_EVALUATE_HPP_

#include "metaview/train.hpp"

namespace metaview {

struct EvalConfig {
  int runs = 10;
  int way = 2;
  int shots = 5;
  int queries = 50; // per class; tasks with pre-split pools use the full query pool
  bool use_cosine_adapt = true;
  int adapt_steps = 10;
  double adapt_lr = 0.1;
  double tau = 10.0;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

struct TaskEval {
  std::string task_id;
  double mean = 0.0;
  double stdev = 0.0; // over runs
};

struct EvalReport {
  std::string benchmark;
  std::string head;
  int shots = 0;
  std::vector<TaskEval> per_task;
  double mean = 0.0;  // over runs x tasks
  double stdev = 0.0; // population std over runs x tasks
  std::vector<std::uint64_t> run_seeds;
  std::string config_hash;
};

/// Meta-test protocol: for each run a fresh support set is drawn per task
/// (queries come from the fixed query pool), the frozen encoder embeds the
/// episode in eval mode, and predictions come from either a cosine classifier
/// fitted on the support embeddings or the bare metric head.
EvalReport evaluate(const std::vector<TaskData>& test_tasks, const ModelParams& model,
                    const EncoderConfig& enc_cfg, HeadKind head, const EvalConfig& cfg);

std::string eval_report_json(const EvalReport& report);
std::string eval_report_table(const EvalReport& report);

} // namespace metaview

#endif // METAVIEW_EVALUATE_HPP_
