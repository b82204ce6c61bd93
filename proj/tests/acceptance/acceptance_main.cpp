// Acceptance suite: one binary, one pass/fail line per criterion.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bench_fixture.hpp"
#include "metaview/evaluate.hpp"
#include "metaview/gradcheck.hpp"
#include "metaview/synthbench.hpp"
#include "metaview/verify.hpp"
#include "test_util.hpp"

using namespace metaview;
using namespace metaview::testutil;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Eigen::MatrixXd randn(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m(i / c, i % c) = rng.normal();
  return m;
}

// ---- criterion 1: closed-form spectra vs truncated-series oracle ----

Outcome criterion_spectral_oracle() {
  Outcome out;
  Rng rng(101);
  ViewConfig ppr;
  ppr.alpha = 0.2;
  ppr.series_truncation = 64;
  ppr.d_z = 16;
  ViewConfig heat = ppr;
  heat.diffusion_kind = DiffusionKind::heat;
  heat.heat_t = 5.0;
  heat.series_truncation = 60;

  const double ppr_tol = std::pow(1.0 - ppr.alpha, ppr.series_truncation) / ppr.alpha;
  const double heat_tol = 1e-10;
  double worst_ppr = 0.0, worst_heat = 0.0;
  for (int i = 0; i < 200; ++i) {
    Graph g = random_connected(rng, 2, 12);
    worst_ppr = std::max(
        worst_ppr, (diffusion_spectrum(g, ppr) - diffusion_spectrum_series_reference(g, ppr))
                       .cwiseAbs()
                       .maxCoeff());
    worst_heat = std::max(worst_heat, (diffusion_spectrum(g, heat) -
                                       diffusion_spectrum_series_reference(g, heat))
                                          .cwiseAbs()
                                          .maxCoeff());
  }
  out.expect(worst_ppr <= ppr_tol, fmt("ppr error %.3e > %.3e", worst_ppr, ppr_tol));
  out.expect(worst_heat <= heat_tol, fmt("heat error %.3e > %.3e", worst_heat, heat_tol));
  if (out.pass)
    out.detail = fmt("200 graphs, ppr err %.2e <= %.2e, heat err %.2e <= 1e-10", worst_ppr,
                     ppr_tol, worst_heat);
  return out;
}

// ---- criterion 2: exact small-graph spectra ----

Outcome criterion_exact_spectra() {
  Outcome out;
  ViewConfig cfg;
  cfg.alpha = 0.2;
  cfg.d_z = 4;
  Graph k2 = graph_from_edges(2, {{0, 1}});
  Graph k3 = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  Eigen::VectorXd z2 = diffusion_spectrum(k2, cfg);
  Eigen::VectorXd z3 = diffusion_spectrum(k3, cfg);
  out.expect(std::abs(z2(0) - 1.0) <= 1e-9, "K2 top eigenvalue differs from 1");
  out.expect(std::abs(z2(1) - 1.0 / 9.0) <= 1e-9, "K2 second eigenvalue differs from 1/9");
  out.expect(std::abs(z3(0) - 1.0) <= 1e-9, "K3 top eigenvalue differs from 1");
  out.expect(std::abs(z3(1) - 1.0 / 7.0) <= 1e-9, "K3 second eigenvalue differs from 1/7");
  out.expect(std::abs(z3(2) - 1.0 / 7.0) <= 1e-9, "K3 third eigenvalue differs from 1/7");
  if (out.pass)
    out.detail = "K2 -> {1, 1/9}, K3 -> {1, 1/7, 1/7} within 1e-9";
  return out;
}

// ---- criterion 3: finite-difference gradient suite, 10 seeds per op ----

Outcome criterion_gradients() {
  Outcome out;
  const double tol = 1e-4;
  double worst = 0.0;
  std::string worst_site;
  auto track = [&](const std::string& site, const GradCheckReport& report) {
    if (report.max_rel_err > worst) {
      worst = report.max_rel_err;
      worst_site = site + "/" + report.worst_param;
    }
    out.expect(report.max_rel_err < tol,
               fmt("%s rel err %.3e", site.c_str(), report.max_rel_err));
  };

  for (int seed = 0; seed < 10 && out.pass; ++seed) {
    Rng rng(1000 + seed);

    { // linear / mlp / activations / pooling / concat / reshape
      ParamStore store;
      Rng init = rng.fork(1);
      Mlp mlp = make_mlp(store, "mlp", 4, 6, 5, 2, init);
      Eigen::MatrixXd x = randn(init, 5, 4);
      auto loss = [&] {
        Tensor h = mlp_apply(mlp, Tensor::constant(x));
        Tensor a = swish(h);
        Tensor b = relu(h);
        Tensor c = sigmoid(h);
        Tensor joined = concat_cols({a, b, c});             // 5 x 15
        Tensor stacked = concat_rows({joined, joined});     // 10 x 15
        Tensor shaped = reshape(stacked, 15, 10);
        Tensor soft = softmax_rows(shaped);
        return add(mean_all(soft), sum_all(mean_pool_rows(shaped)));
      };
      track("mlp-activations", finite_diff_check(store, loss));
    }
    { // gin_conv + dropout + fwt (train, frozen rng) + scalar_mul
      ParamStore store;
      Rng init = rng.fork(2);
      Mlp mlp = make_mlp(store, "gin", 3, 6, 6, 2, init);
      Tensor eps = store.add("eps", Eigen::MatrixXd::Zero(1, 1));
      Graph g = random_connected(init, 5, 9, 3);
      const std::uint64_t noise_seed = init.next_u64();
      std::vector<int> labels(static_cast<std::size_t>(g.num_nodes()));
      for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = static_cast<int>(i % 2);
      Rng head_init = init.fork(3);
      const Eigen::MatrixXd head = randn(head_init, 6, 2);
      auto loss = [&] {
        Rng noise(noise_seed);
        Tensor h = gin_conv(g.adj, Tensor::constant(g.features), eps, mlp);
        h = dropout(h, 0.4, Mode::train, noise);
        h = fwt(h, 0.1, 0.1, Mode::train, noise);
        h = swish(h);
        return cross_entropy_sum(matmul(h, Tensor::constant(head)), labels);
      };
      track("gin-fwt-dropout", finite_diff_check(store, loss));
    }
    { // heads: proto (pairwise_sqdist), match (cosine + nll), relation (pair_concat)
      ParamStore store;
      Rng init = rng.fork(4);
      Linear emb = make_linear(store, "emb", 5, 6, init);
      Mlp rel = make_relation_mlp(store, 6, init);
      Eigen::MatrixXd xs = randn(init, 6, 5), xq = randn(init, 4, 5);
      const std::vector<int> ys = {0, 0, 0, 1, 1, 1};
      const std::vector<int> yq = {0, 1, 1, 0};
      auto embed = [&](const Eigen::MatrixXd& x) {
        return swish(linear_apply(emb, Tensor::constant(x)));
      };
      auto proto_loss = [&] {
        return cross_entropy_sum(proto_logits(embed(xs), ys, embed(xq), 2), yq);
      };
      auto match_loss = [&] {
        return nll_probs_sum(match_probs(embed(xs), ys, embed(xq), 2), yq);
      };
      auto relation_loss = [&] {
        Tensor scores = relation_scores(embed(xs), ys, embed(xq), 2, rel);
        return head_loss_sum(HeadKind::relation, scores, yq);
      };
      track("proto-head", finite_diff_check(store, proto_loss));
      track("match-head", finite_diff_check(store, match_loss));
      track("relation-head", finite_diff_check(store, relation_loss));
    }
    { // full chain: encode_graph (train mode) -> proto head -> cross entropy
      ViewConfig views;
      views.d_pad = 6;
      views.d_u = 4;
      views.d_z = 8;
      EncoderConfig enc;
      enc.d_h = 6;
      enc.gnn_layers = 2;
      enc.mlp_layers = 2;
      enc.dropout_p = 0.3;
      enc.fwt.enabled = true;
      ParamStore store;
      Rng init = rng.fork(5);
      EncoderParams params = init_encoder_params(store, enc, views, init);
      std::vector<ViewBundle> bundles;
      for (int i = 0; i < 4; ++i)
        bundles.push_back(build_views(random_connected(init, 4, 8, 4), views));
      const std::uint64_t noise_seed = init.next_u64();
      auto loss = [&] {
        Rng noise(noise_seed);
        std::vector<Tensor> hs;
        for (int i = 0; i < 3; ++i)
          hs.push_back(encode_graph(bundles[static_cast<std::size_t>(i)], params, enc,
                                    Mode::train, noise)
                           .h);
        Tensor support = concat_rows({hs[0], hs[1]});
        Tensor query = hs[2];
        Tensor logits = proto_logits(support, {0, 1}, query, 2);
        return cross_entropy_sum(logits, {1});
      };
      GradCheckOptions options;
      options.max_entries_per_param = 20;
      options.seed = static_cast<std::uint64_t>(seed);
      track("encode-proto-chain", finite_diff_check(store, loss, options));
    }
  }
  if (out.pass)
    out.detail = fmt("10 seeds per op, max rel err %.2e at %s", worst, worst_site.c_str());
  return out;
}

// ---- criterion 4: permutation invariance of eval-mode encode_graph ----

Outcome criterion_permutation_invariance() {
  Outcome out;
  ViewConfig views;
  views.d_pad = 10;
  views.d_u = 8;
  views.d_z = 12;
  EncoderConfig enc;
  enc.d_h = 16;
  enc.gnn_layers = 2;
  enc.mlp_layers = 2;
  ParamStore store;
  Rng init(404);
  EncoderParams params = init_encoder_params(store, enc, views, init);

  Rng rng(405);
  Rng unused(0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Graph g = random_connected(rng, 4, 14, 6);
    EncodeResult ref = encode_graph(build_views(g, views), params, enc, Mode::eval, unused);
    for (int p = 0; p < 20; ++p) {
      Graph pg = permute_graph(g, random_perm(rng, g.num_nodes()));
      EncodeResult got =
          encode_graph(build_views(pg, views), params, enc, Mode::eval, unused);
      worst = std::max(worst, (ref.h.value() - got.h.value()).cwiseAbs().maxCoeff());
      worst = std::max(worst, (ref.alpha.value() - got.alpha.value()).cwiseAbs().maxCoeff());
    }
  }
  out.expect(worst <= 1e-9, fmt("deviation %.3e > 1e-9", worst));
  if (out.pass)
    out.detail = fmt("50 graphs x 20 permutations, max deviation %.2e", worst);
  return out;
}

// ---- criterion 5: overfit fixture ----

Outcome criterion_overfit() {
  Outcome out;
  ViewConfig views;
  views.d_pad = 10;
  views.d_u = 8;
  views.d_z = 16;
  TaskData task = build_overfit_task(views, 0);

  EncoderConfig enc;
  enc.d_h = 32;
  enc.gnn_layers = 2;
  enc.mlp_layers = 2;
  enc.dropout_p = 0.0; // capacity check: regularization off
  enc.fwt.enabled = false;
  TrainConfig train;
  train.epochs = 500; // one task, meta_batch 1 => 500 optimizer steps
  train.meta_batch = 1;
  train.shots = 5;
  train.queries = 15;
  train.base_lr = 0.01;
  train.seed = 7;

  ModelParams model = init_model_params(enc, views, HeadKind::proto, train.seed);
  TrainResult result = meta_train({task}, {}, model, enc, train);
  out.expect(result.optimizer_steps == 500, "expected exactly 500 optimizer steps");

  Episode ep = sample_episode(task, 2, 5, 15, 99);
  Rng unused(0);
  EncodedEpisode enc_ep = encode_episode(ep, model.encoder, enc, Mode::eval, unused);
  const double query_loss =
      episode_loss_sum(enc_ep, HeadKind::proto, 2, nullptr).item() / 30.0;
  out.expect(query_loss < 0.05, fmt("final query loss %.4f >= 0.05", query_loss));

  // smoothed-loss monotonicity over 20-step windows
  std::vector<double> windows;
  for (std::size_t at = 0; at + 20 <= result.history.size(); at += 20) {
    double mean = 0.0;
    for (std::size_t i = at; i < at + 20; ++i)
      mean += result.history[i].train_loss;
    windows.push_back(mean / 20.0);
  }
  for (std::size_t w = 1; w < windows.size(); ++w)
    out.expect(windows[w] <= windows[w - 1] + 1e-6,
               fmt("window %zu rose: %.6f -> %.6f", w, windows[w - 1], windows[w]));
  if (out.pass)
    out.detail = fmt("query loss %.4f after 500 steps, %zu smoothed windows non-increasing",
                     query_loss, windows.size());
  return out;
}

// ---- criteria 6 and 9: synthetic cross-domain transfer + determinism ----

struct TransferSetup {
  ViewConfig views;
  EncoderConfig enc;
  TrainConfig train;
  EvalConfig eval;
  SynthSuiteConfig synth;

  TransferSetup() {
    // appendix defaults scaled to d_h = 64
    views.d_pad = 32;
    views.d_u = 16;
    views.d_z = 32;
    enc.d_h = 64;
    enc.gnn_layers = 2;
    enc.mlp_layers = 2;
    enc.dropout_p = 0.6;
    enc.fwt.enabled = true;
    train.epochs = 100;
    train.meta_batch = 16;
    train.patience = 30;
    train.base_lr = 3e-3;
    train.shots = 5;
    train.queries = 15;
    train.seed = 20;
    eval.runs = 10;
    eval.shots = 5;
    eval.queries = 25;
    eval.use_cosine_adapt = true;
    eval.adapt_steps = 10;
    eval.adapt_lr = 0.1;
    eval.seed = 21;
    synth.train_tasks = 12;
    synth.dev_tasks = 4;
    synth.test_tasks = 6;
    synth.pool_per_class = 30;
    synth.train_feature_dim = 8;  // source feature space
    synth.test_feature_dim = 16;  // heterogeneous target feature space
    synth.seed = 22;
  }
};

EvalReport run_transfer(const TransferSetup& setup, bool use_u, bool use_z) {
  TransferSetup s = setup;
  s.enc.use_u = use_u;
  s.enc.use_z = use_z;
  SynthSuite suite = build_synth_suite(s.synth, s.views);
  ModelParams model = init_model_params(s.enc, s.views, HeadKind::proto, s.train.seed);
  meta_train(suite.train, suite.dev, model, s.enc, s.train);
  EvalReport report = evaluate(suite.test, model, s.enc, HeadKind::proto, s.eval);
  report.benchmark = "synthetic-transfer";
  report.config_hash = use_u && use_z ? "xuz" : "x";
  return report;
}

std::string g_transfer_report_json; // criterion 9 compares against this

Outcome criterion_transfer() {
  Outcome out;
  TransferSetup setup;
  EvalReport full = run_transfer(setup, true, true);
  EvalReport x_only = run_transfer(setup, false, false);
  g_transfer_report_json = eval_report_json(full);

  out.expect(full.mean >= 0.80, fmt("5-shot transfer accuracy %.4f < 0.80", full.mean));
  out.expect(full.mean >= x_only.mean + 0.10,
             fmt("gain over X-only too small: %.4f vs %.4f", full.mean, x_only.mean));
  if (out.pass)
    out.detail =
        fmt("x,u,z accuracy %.4f vs x-only %.4f (gain %.4f)", full.mean, x_only.mean,
            full.mean - x_only.mean);
  return out;
}

Outcome criterion_determinism() {
  Outcome out;
  if (g_transfer_report_json.empty()) {
    out.pass = false;
    out.detail = "criterion 6 did not produce a report";
    return out;
  }
  TransferSetup setup;
  EvalReport again = run_transfer(setup, true, true);
  const std::string json = eval_report_json(again);
  out.expect(json == g_transfer_report_json, "metrics reports differ between identical runs");
  if (out.pass)
    out.detail = fmt("second run reproduced the metrics report byte-for-byte (mean %.4f)",
                     again.mean);
  return out;
}

// ---- criterion 7: benchmark factory counts ----

Outcome criterion_benchmark_factory() {
  Outcome out;
  TempDir dir("acceptance-bench");
  write_bench_fixture(dir.path());
  BenchmarkManifest manifest = build_fixture_benchmark(dir.path(), 11);

  BenchFixtureExpect expect =
      read_bench_expect(std::filesystem::path(METAVIEW_FIXTURE_DIR) / "bench_expect.json");
  std::map<std::string, int> per_dataset;
  for (const auto& t : manifest.tasks)
    per_dataset[t.source_dataset] += 1;
  out.expect(per_dataset == expect.tasks_per_dataset, "per-dataset task counts diverge");
  out.expect(static_cast<int>(manifest.train.size()) == expect.train,
             fmt("train count %zu != %d", manifest.train.size(), expect.train));
  out.expect(static_cast<int>(manifest.dev.size()) == expect.dev,
             fmt("dev count %zu != %d", manifest.dev.size(), expect.dev));
  out.expect(static_cast<int>(manifest.test.size()) == expect.test,
             fmt("test count %zu != %d", manifest.test.size(), expect.test));
  for (const auto& t : manifest.tasks) {
    out.expect(t.support_ids[0].size() == 20 && t.support_ids[1].size() == 20,
               t.task_id + ": support is not 20 per class");
    out.expect(t.query_ids[0].size() == 50 && t.query_ids[1].size() == 50,
               t.task_id + ": query is not 50 per class");
  }
  try {
    validate_benchmark(manifest); // origin-atomicity + disjointness scans
  } catch (const std::exception& e) {
    out.expect(false, std::string("consistency scan failed: ") + e.what());
  }

  // optional full-corpus path: point METAVIEW_TU_ROOT at a directory holding
  // the converted public datasets plus a datasets.txt listing to reproduce
  // the published molecules -> bioinformatics split sizes
  std::string corpus_note = "full-corpus path skipped (METAVIEW_TU_ROOT unset)";
  if (const char* root = std::getenv("METAVIEW_TU_ROOT")) {
    BenchmarkManifest full = build_benchmark_from_listing(
        read_dataset_listing(std::filesystem::path(root) / "datasets.txt"), root,
        "mol-bio", "molecules", "bioinformatics", 11, AssembleOptions{.dev_tasks = 5});
    out.expect(full.train.size() == 187 && full.dev.size() == 5 && full.test.size() == 24,
               fmt("full corpus: %zu/%zu/%zu != 187/5/24", full.train.size(),
                   full.dev.size(), full.test.size()));
    corpus_note = fmt("full corpus: %zu/%zu/%zu", full.train.size(), full.dev.size(),
                      full.test.size());
  }
  if (out.pass)
    out.detail = fmt("fixture counts %d/%d/%d match the expectation file; scans pass; %s",
                     expect.train, expect.dev, expect.test, corpus_note.c_str());
  return out;
}

// ---- criterion 8: head correctness ----

Outcome criterion_heads() {
  Outcome out;
  Rng rng(808);
  for (int trial = 0; trial < 1000 && out.pass; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    const int m = 1 + static_cast<int>(rng.uniform_index(5));
    Eigen::MatrixXd hs = randn(rng, k, 6); // 1-shot: one support per class
    Eigen::MatrixXd hq = randn(rng, m, 6);
    std::vector<int> ys(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      ys[static_cast<std::size_t>(j)] = j;

    Tensor logits = proto_logits(Tensor::constant(hs), ys, Tensor::constant(hq), k);
    auto preds = head_predictions(logits.value());
    for (Eigen::Index q = 0; q < m; ++q) {
      int nearest = 0;
      double best = (hq.row(q) - hs.row(0)).squaredNorm();
      for (int j = 1; j < k; ++j) {
        const double d = (hq.row(q) - hs.row(j)).squaredNorm();
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
      out.expect(preds[static_cast<std::size_t>(q)] == nearest,
                 "1-shot argmax differs from nearest neighbor");
    }

    // simplex checks at 1e-12
    Eigen::MatrixXd proto_rows = softmax_rows(logits).value();
    Eigen::MatrixXd match_rows =
        match_probs(Tensor::constant(hs), ys, Tensor::constant(hq), k).value();
    for (Eigen::Index q = 0; q < m; ++q) {
      out.expect(std::abs(proto_rows.row(q).sum() - 1.0) <= 1e-12,
                 "proto softmax row sum off by more than 1e-12");
      out.expect(std::abs(match_rows.row(q).sum() - 1.0) <= 1e-12,
                 "match row sum off by more than 1e-12");
    }
  }
  if (out.pass)
    out.detail = "1000 instances: 1-shot == nearest neighbor, rows sum to 1 within 1e-12";
  return out;
}

} // namespace

int main(int argc, char** argv) {
  const std::set<std::string> only(argv + 1, argv + argc);
  auto selected = [&](const std::string& id) { return only.empty() || only.count(id); };

  struct Criterion {
    std::string id;
    std::string name;
    double budget_seconds; // 0 = no stated runtime bound
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"1", "spectral oracle (closed form vs series)", 30, criterion_spectral_oracle},
      {"2", "exact small-graph spectra", 0, criterion_exact_spectra},
      {"3", "gradient suite", 120, criterion_gradients},
      {"4", "permutation invariance", 0, criterion_permutation_invariance},
      {"5", "overfit fixture", 120, criterion_overfit},
      {"6", "synthetic cross-domain transfer", 900, criterion_transfer},
      {"7", "benchmark factory counts", 0, criterion_benchmark_factory},
      {"8", "head correctness", 0, criterion_heads},
      {"9", "determinism of the transfer run", 0, criterion_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected(c.id))
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      out.pass = false;
      out.detail += fmt(" [over runtime budget: %.1fs > %.0fs]", secs, c.budget_seconds);
    }
    std::printf("[%s] criterion %s: %s - %s (%.1fs)\n", out.pass ? "PASS" : "FAIL",
                c.id.c_str(), c.name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  if (failures)
    std::printf("%d criterion(s) FAILED\n", failures);
  else
    std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
