#include "metaview/train.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

namespace metaview {

void TrainConfig::validate() const {
  if (meta_batch < 1 || epochs < 0 || patience < 1)
    fail(Errc::config, "meta_batch and patience must be positive, epochs non-negative");
  if (base_lr <= 0.0 || task_lr <= 0.0 || adapt_lr <= 0.0)
    fail(Errc::config, "learning rates must be positive");
  if (way < 2 || shots < 1 || queries < 1)
    fail(Errc::config, "episode shape must satisfy way >= 2, shots >= 1, queries >= 1");
  if (task_steps < 0 || adapt_steps < 0)
    fail(Errc::config, "step counts must be non-negative");
  if (jobs < 0)
    fail(Errc::config, "jobs must be non-negative");
}

ModelParams init_model_params(const EncoderConfig& enc_cfg, const ViewConfig& views,
                              HeadKind head, std::uint64_t seed) {
  ModelParams model;
  Rng rng(Rng::derive_seed(seed, 0x1217ULL));
  model.encoder = init_encoder_params(model.store, enc_cfg, views, rng);
  if (head == HeadKind::relation) {
    model.relation = make_relation_mlp(model.store, enc_cfg.d_h, rng);
    model.has_relation = true;
  }
  return model;
}

EncodedEpisode encode_episode(const Episode& ep, const EncoderParams& params,
                              const EncoderConfig& cfg, Mode mode, Rng& rng) {
  EncodedEpisode out;
  std::vector<Tensor> sup, qry;
  out.support_alpha.resize(static_cast<Eigen::Index>(ep.support.size()), 3);
  out.query_alpha.resize(static_cast<Eigen::Index>(ep.query.size()), 3);
  for (std::size_t i = 0; i < ep.support.size(); ++i) {
    EncodeResult r = encode_graph(*ep.support[i].bundle, params, cfg, mode, rng);
    sup.push_back(r.h);
    out.support_alpha.row(static_cast<Eigen::Index>(i)) = r.alpha.value().row(0);
    out.y_support.push_back(ep.support[i].label);
  }
  for (std::size_t i = 0; i < ep.query.size(); ++i) {
    EncodeResult r = encode_graph(*ep.query[i].bundle, params, cfg, mode, rng);
    qry.push_back(r.h);
    out.query_alpha.row(static_cast<Eigen::Index>(i)) = r.alpha.value().row(0);
    out.y_query.push_back(ep.query[i].label);
  }
  out.h_support = concat_rows(sup);
  out.h_query = concat_rows(qry);
  return out;
}

Tensor episode_head_output(const EncodedEpisode& enc, HeadKind head, int way,
                           const Mlp* relation) {
  switch (head) {
  case HeadKind::proto:
    return proto_logits(enc.h_support, enc.y_support, enc.h_query, way);
  case HeadKind::match:
    return match_probs(enc.h_support, enc.y_support, enc.h_query, way);
  case HeadKind::relation:
    if (!relation)
      fail(Errc::config, "relation head selected but no relation MLP present");
    return relation_scores(enc.h_support, enc.y_support, enc.h_query, way, *relation);
  }
  fail(Errc::value, "unreachable head kind");
}

Tensor episode_loss_sum(const EncodedEpisode& enc, HeadKind head, int way,
                        const Mlp* relation) {
  return head_loss_sum(head, episode_head_output(enc, head, way, relation), enc.y_query);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = jobs <= 0 ? hw : static_cast<std::size_t>(jobs);
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count)
          return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error)
            first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads)
    t.join();
  if (first_error)
    std::rethrow_exception(first_error);
}

namespace {

double episode_accuracy(const EncodedEpisode& enc, HeadKind head, int way,
                        const Mlp* relation) {
  Tensor out = episode_head_output(enc, head, way, relation);
  auto preds = head_predictions(out.value());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    correct += preds[i] == enc.y_query[i] ? 1u : 0u;
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

} // namespace

TrainResult meta_train(const std::vector<TaskData>& train_tasks,
                       const std::vector<TaskData>& dev_tasks, ModelParams& model,
                       const EncoderConfig& enc_cfg, const TrainConfig& cfg) {
  cfg.validate();
  enc_cfg.validate();
  if (train_tasks.empty())
    fail(Errc::episode, "meta_train requires at least one training task");
  const Mlp* relation = model.has_relation ? &model.relation : nullptr;
  if (cfg.head == HeadKind::relation && !relation)
    fail(Errc::config, "relation head selected but model has no relation MLP");

  // dev episodes are fixed across epochs for a stable early-stopping signal
  std::vector<Episode> dev_episodes;
  for (std::size_t i = 0; i < dev_tasks.size(); ++i)
    dev_episodes.push_back(sample_episode(dev_tasks[i], cfg.way, cfg.shots, cfg.queries,
                                          Rng::derive_seed(cfg.seed, 0xdee0ULL + i)));

  Adam adam({cfg.base_lr});
  TrainResult result;
  auto best = model.store.snapshot();
  double best_acc = -1.0;
  int epochs_since_best = 0;

  const double query_count = static_cast<double>(cfg.way) * static_cast<double>(cfg.queries);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_lr(epoch, cfg.epochs, cfg.base_lr);
    adam.set_lr(lr);

    std::vector<std::size_t> order(train_tasks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng order_rng(Rng::derive_seed(cfg.seed, 0x0dd0ULL + static_cast<std::uint64_t>(epoch)));
    order_rng.shuffle(order);

    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(cfg.meta_batch)) {
      const std::size_t batch_n =
          std::min<std::size_t>(cfg.meta_batch, order.size() - at);
      std::vector<GradTable> tables(batch_n);
      std::vector<double> losses(batch_n, 0.0);

      parallel_for(batch_n, cfg.jobs, [&](std::size_t i) {
        const std::size_t task_index = order[at + i];
        const std::uint64_t ep_seed = Rng::derive_seed(
            Rng::derive_seed(cfg.seed, 0xe900ULL + static_cast<std::uint64_t>(epoch)),
            task_index);
        Episode ep =
            sample_episode(train_tasks[task_index], cfg.way, cfg.shots, cfg.queries, ep_seed);
        Rng noise(Rng::derive_seed(ep_seed, 0x4011ULL));
        EncodedEpisode enc = encode_episode(ep, model.encoder, enc_cfg, Mode::train, noise);
        Tensor loss = episode_loss_sum(enc, cfg.head, cfg.way, relation);
        losses[i] = loss.item();
        tables[i] = loss.backward_table();
      });

      // deterministic merge in task order; Algorithm-1 normalization
      const double norm = 1.0 / (static_cast<double>(batch_n) * query_count);
      GradTable merged;
      for (const auto& [name, param] : model.store.items()) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(param.rows(), param.cols());
        bool any = false;
        for (const auto& table : tables) {
          auto found = table.find(param.id());
          if (found != table.end()) {
            g += found->second;
            any = true;
          }
        }
        if (any)
          merged.emplace(param.id(), g * norm);
      }
      adam.step(model.store, merged);
      ++result.optimizer_steps;

      double batch_loss = 0.0;
      for (double l : losses)
        batch_loss += l;
      epoch_loss += batch_loss * norm;
      ++batches;

      if (!std::isfinite(batch_loss))
        fail(Errc::numeric, "meta_train: non-finite loss at epoch " + std::to_string(epoch));
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = lr;
    stats.train_loss = batches > 0 ? epoch_loss / batches : 0.0;

    if (!dev_episodes.empty()) {
      std::vector<double> accs(dev_episodes.size(), 0.0);
      parallel_for(dev_episodes.size(), cfg.jobs, [&](std::size_t i) {
        Rng unused(0);
        EncodedEpisode enc =
            encode_episode(dev_episodes[i], model.encoder, enc_cfg, Mode::eval, unused);
        accs[i] = episode_accuracy(enc, cfg.head, cfg.way, relation);
      });
      stats.dev_acc =
          std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(accs.size());

      if (stats.dev_acc > best_acc) {
        best_acc = stats.dev_acc;
        best = model.store.snapshot();
        result.best_epoch = epoch;
        epochs_since_best = 0;
      } else {
        ++epochs_since_best;
      }
      result.history.push_back(stats);
      if (epochs_since_best >= cfg.patience) {
        result.early_stopped = true;
        break;
      }
    } else {
      stats.dev_acc = std::numeric_limits<double>::quiet_NaN();
      result.history.push_back(stats);
    }
  }

  if (dev_episodes.empty()) {
    result.best_epoch = cfg.epochs - 1;
    result.best_dev_acc = std::numeric_limits<double>::quiet_NaN();
  } else {
    model.store.restore(best);
    result.best_dev_acc = best_acc;
  }
  return result;
}

} // namespace metaview
