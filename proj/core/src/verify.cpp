#include "metaview/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "metaview/benchbuild.hpp"
#include "metaview/gradcheck.hpp"
#include "metaview/synthbench.hpp"
#include "metaview/train.hpp"

namespace metaview {

namespace {

Graph random_connected_graph(Rng& rng, std::int64_t min_n, std::int64_t max_n,
                             Eigen::Index feature_dim = 4) {
  SynthParams params;
  params.n = rng.uniform_int(min_n, max_n);
  params.features = SynthFeatures::gaussian;
  params.feature_dim = feature_dim;
  params.p = rng.uniform(0.2, 0.7);
  params.m = 2;
  const SynthFamily families[] = {SynthFamily::erdos_renyi, SynthFamily::cycle,
                                  SynthFamily::tree, SynthFamily::star,
                                  SynthFamily::barabasi_albert};
  SynthFamily family = families[rng.uniform_index(5)];
  if (family == SynthFamily::cycle)
    params.n = std::max<std::int64_t>(params.n, 3);
  if (family == SynthFamily::barabasi_albert)
    params.n = std::max<std::int64_t>(params.n, 4);
  return synth_graph(family, params, rng.next_u64());
}

std::vector<NodeIndex> random_permutation(Rng& rng, NodeIndex n) {
  std::vector<NodeIndex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), NodeIndex{0});
  rng.shuffle(perm);
  return perm;
}

struct Suite {
  std::string detail;
  bool pass = true;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

// ---- individual suites ----

Suite spectral_oracle(bool quick, std::uint64_t seed) {
  Suite s;
  Rng rng(Rng::derive_seed(seed, 1));
  const int graphs = quick ? 60 : 200;
  ViewConfig ppr;
  ppr.diffusion_kind = DiffusionKind::ppr;
  ppr.alpha = 0.2;
  ppr.series_truncation = 64;
  ppr.d_z = 16;
  ViewConfig heat = ppr;
  heat.diffusion_kind = DiffusionKind::heat;
  heat.heat_t = 5.0;
  heat.series_truncation = 60;
  const double ppr_tol = std::pow(1.0 - ppr.alpha, ppr.series_truncation) / ppr.alpha;
  const double heat_tol = 1e-10;
  for (int i = 0; i < graphs && s.pass; ++i) {
    Graph g = random_connected_graph(rng, 2, 12);
    const double ppr_err =
        (diffusion_spectrum(g, ppr) - diffusion_spectrum_series_reference(g, ppr))
            .cwiseAbs()
            .maxCoeff();
    const double heat_err =
        (diffusion_spectrum(g, heat) - diffusion_spectrum_series_reference(g, heat))
            .cwiseAbs()
            .maxCoeff();
    s.check(ppr_err <= ppr_tol, "ppr closed form vs series: " + std::to_string(ppr_err));
    s.check(heat_err <= heat_tol, "heat closed form vs series: " + std::to_string(heat_err));
  }
  if (s.pass)
    s.detail = std::to_string(graphs) + " graphs within ppr " + std::to_string(ppr_tol) +
               ", heat " + std::to_string(heat_tol);
  return s;
}

Suite exact_spectra(std::uint64_t) {
  Suite s;
  ViewConfig cfg;
  cfg.alpha = 0.2;
  cfg.d_z = 4;
  SynthParams p2{.n = 2};
  Graph k2 = synth_graph(SynthFamily::star, p2, 0); // K2 is the 2-node star
  Eigen::VectorXd z2 = diffusion_spectrum(k2, cfg);
  s.check(std::abs(z2(0) - 1.0) <= 1e-9 && std::abs(z2(1) - 1.0 / 9.0) <= 1e-9 &&
              z2(2) == 0.0,
          "K2 spectrum mismatch");
  SynthParams p3{.n = 3};
  Graph k3 = synth_graph(SynthFamily::cycle, p3, 0); // C3 == K3
  Eigen::VectorXd z3 = diffusion_spectrum(k3, cfg);
  s.check(std::abs(z3(0) - 1.0) <= 1e-9 && std::abs(z3(1) - 1.0 / 7.0) <= 1e-9 &&
              std::abs(z3(2) - 1.0 / 7.0) <= 1e-9,
          "K3 spectrum mismatch");
  if (s.pass)
    s.detail = "K2 -> {1, 1/9}, K3 -> {1, 1/7, 1/7}";
  return s;
}

Suite gradient_suite(bool quick, std::uint64_t seed) {
  Suite s;
  const int seeds = quick ? 2 : 10;
  const double tol = 1e-4;
  double worst = 0.0;
  for (int iter = 0; iter < seeds && s.pass; ++iter) {
    Rng rng(Rng::derive_seed(seed, 100 + static_cast<std::uint64_t>(iter)));

    // linear + swish + mean_pool
    {
      ParamStore store;
      Linear lin = make_linear(store, "lin", 4, 3, rng);
      Eigen::MatrixXd x(5, 4);
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i / 4, i % 4) = rng.normal();
      auto loss = [&] {
        return sum_all(swish(mean_pool_rows(linear_apply(lin, Tensor::constant(x)))));
      };
      worst = std::max(worst, finite_diff_check(store, loss).max_rel_err);
    }
    // gin_conv chain with dropout (frozen mask) and softmax cross-entropy
    {
      ParamStore store;
      Rng init = rng.fork(7);
      Mlp mlp = make_mlp(store, "mlp", 3, 5, 5, 2, init);
      Tensor eps = store.add("eps", Eigen::MatrixXd::Zero(1, 1));
      SynthParams sp{.n = 6};
      sp.features = SynthFeatures::gaussian;
      sp.feature_dim = 3;
      Graph g = synth_graph(SynthFamily::cycle, sp, init.next_u64());
      const std::vector<int> labels = {0, 1, 0, 1, 0, 1};
      Rng head_init(5);
      const Eigen::MatrixXd head_w = xavier_uniform(5, 2, head_init);
      auto loss = [&] {
        Rng drop(99);
        Tensor h = gin_conv(g.adj, Tensor::constant(g.features), eps, mlp);
        h = dropout(h, 0.3, Mode::train, drop);
        h = swish(h);
        return cross_entropy_sum(matmul(h, Tensor::constant(head_w)), labels);
      };
      worst = std::max(worst, finite_diff_check(store, loss).max_rel_err);
    }
    // proto / match / relation heads over parametrized embeddings
    {
      ParamStore store;
      Rng init = rng.fork(13);
      Linear emb = make_linear(store, "emb", 4, 6, init);
      Mlp rel = make_relation_mlp(store, 6, init);
      Eigen::MatrixXd xs(6, 4), xq(4, 4);
      for (Eigen::Index i = 0; i < xs.size(); ++i)
        xs(i / 4, i % 4) = init.normal();
      for (Eigen::Index i = 0; i < xq.size(); ++i)
        xq(i / 4, i % 4) = init.normal();
      const std::vector<int> ys = {0, 0, 0, 1, 1, 1};
      const std::vector<int> yq = {0, 1, 0, 1};
      auto embed = [&](const Eigen::MatrixXd& x) {
        return swish(linear_apply(emb, Tensor::constant(x)));
      };
      auto proto_loss = [&] {
        return cross_entropy_sum(proto_logits(embed(xs), ys, embed(xq), 2), yq);
      };
      auto match_loss = [&] {
        return nll_probs_sum(match_probs(embed(xs), ys, embed(xq), 2), yq);
      };
      auto rel_loss = [&] {
        Tensor scores = relation_scores(embed(xs), ys, embed(xq), 2, rel);
        Eigen::MatrixXd target = Eigen::MatrixXd::Zero(4, 2);
        for (int r = 0; r < 4; ++r)
          target(r, yq[static_cast<std::size_t>(r)]) = 1.0;
        Tensor diff = sub(scores, Tensor::constant(target));
        return sum_all(hadamard(diff, diff));
      };
      worst = std::max(worst, finite_diff_check(store, proto_loss).max_rel_err);
      worst = std::max(worst, finite_diff_check(store, match_loss).max_rel_err);
      worst = std::max(worst, finite_diff_check(store, rel_loss).max_rel_err);
    }
    s.check(worst < tol, "gradient mismatch, rel err " + std::to_string(worst));
  }
  if (s.pass)
    s.detail = "max rel err " + std::to_string(worst) + " over " + std::to_string(seeds) +
               " seeds";
  return s;
}

Suite encoder_invariance(bool quick, std::uint64_t seed) {
  Suite s;
  Rng rng(Rng::derive_seed(seed, 3));
  ViewConfig views;
  views.d_pad = 8;
  views.d_u = 8;
  views.d_z = 12;
  EncoderConfig enc;
  enc.d_h = 12;
  enc.gnn_layers = 2;
  enc.mlp_layers = 2;
  enc.dropout_p = 0.6;
  ParamStore store;
  Rng init(Rng::derive_seed(seed, 4));
  EncoderParams params = init_encoder_params(store, enc, views, init);

  const int graphs = quick ? 6 : 20;
  const int perms = quick ? 4 : 10;
  double worst = 0.0;
  for (int i = 0; i < graphs && s.pass; ++i) {
    Graph g = random_connected_graph(rng, 4, 10, 6);
    ViewBundle base = build_views(g, views);
    Rng unused(0);
    EncodeResult ref = encode_graph(base, params, enc, Mode::eval, unused);
    for (int p = 0; p < perms; ++p) {
      Graph pg = permute_graph(g, random_permutation(rng, g.num_nodes()));
      ViewBundle pb = build_views(pg, views);
      EncodeResult got = encode_graph(pb, params, enc, Mode::eval, unused);
      const double dev = (ref.h.value() - got.h.value()).cwiseAbs().maxCoeff();
      worst = std::max(worst, dev);
      s.check(dev <= 1e-9, "permutation deviation " + std::to_string(dev));
    }
  }
  if (s.pass)
    s.detail = "max deviation " + std::to_string(worst);
  return s;
}

Suite simplex_properties(bool quick, std::uint64_t seed) {
  Suite s;
  Rng rng(Rng::derive_seed(seed, 5));
  const int iters = quick ? 20 : 100;
  for (int i = 0; i < iters && s.pass; ++i) {
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng.uniform_index(6));
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index j = 0; j < x.size(); ++j)
      x(j / cols, j % cols) = rng.normal(0, 3);
    Eigen::MatrixXd y = softmax_rows(Tensor::constant(x)).value();
    for (Eigen::Index r = 0; r < rows; ++r) {
      s.check(y.row(r).minCoeff() >= 0.0, "negative softmax output");
      s.check(std::abs(y.row(r).sum() - 1.0) <= 1e-12, "softmax row sum off");
    }
    // match head rows are distributions
    Eigen::MatrixXd hs(4, 3), hq(3, 3);
    for (Eigen::Index j = 0; j < hs.size(); ++j)
      hs(j / 3, j % 3) = rng.normal();
    for (Eigen::Index j = 0; j < hq.size(); ++j)
      hq(j / 3, j % 3) = rng.normal();
    Eigen::MatrixXd probs =
        match_probs(Tensor::constant(hs), {0, 1, 0, 1}, Tensor::constant(hq), 2).value();
    for (Eigen::Index r = 0; r < probs.rows(); ++r)
      s.check(std::abs(probs.row(r).sum() - 1.0) <= 1e-12 && probs.row(r).minCoeff() >= 0.0,
              "match head row is not a distribution");
  }
  if (s.pass)
    s.detail = std::to_string(iters) + " random instances on the simplex";
  return s;
}

Suite xavier_moments(std::uint64_t seed) {
  Suite s;
  Rng rng(Rng::derive_seed(seed, 6));
  const Eigen::Index d = 100;
  const int reps = 10; // 10 * 100 * 100 = 1e5 samples
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    Eigen::MatrixXd w = xavier_uniform(d, d, rng);
    sum += w.sum();
    sumsq += w.array().square().sum();
  }
  const double n = static_cast<double>(reps) * static_cast<double>(d * d);
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double expected = 2.0 / static_cast<double>(d + d);
  s.check(std::abs(var - expected) <= 0.1 * expected,
          "xavier variance " + std::to_string(var) + " vs " + std::to_string(expected));
  if (s.pass)
    s.detail = "empirical variance within 10% of 2/(fan_in+fan_out)";
  return s;
}

Suite episode_disjointness(bool quick, std::uint64_t seed) {
  Suite s;
  ViewConfig views;
  views.d_pad = 8;
  views.d_u = 4;
  views.d_z = 8;
  TaskData task = build_overfit_task(views, Rng::derive_seed(seed, 7));
  const int trials = quick ? 1000 : 10000;
  for (int t = 0; t < trials && s.pass; ++t) {
    Episode ep = sample_episode(task, 2, 3, 5, static_cast<std::uint64_t>(t));
    std::set<std::int64_t> support_ids;
    for (const auto& m : ep.support)
      support_ids.insert(m.origin_id);
    for (const auto& m : ep.query)
      s.check(!support_ids.count(m.origin_id), "support and query overlap");
  }
  if (s.pass)
    s.detail = std::to_string(trials) + " seeds, support and query disjoint";
  return s;
}

Suite train_determinism(std::uint64_t seed) {
  Suite s;
  ViewConfig views;
  views.d_pad = 8;
  views.d_u = 4;
  views.d_z = 8;
  EncoderConfig enc;
  enc.d_h = 8;
  enc.gnn_layers = 1;
  enc.mlp_layers = 1;
  enc.dropout_p = 0.3;
  TrainConfig tc;
  tc.epochs = 3;
  tc.meta_batch = 2;
  tc.shots = 2;
  tc.queries = 4;
  tc.base_lr = 0.01;
  tc.seed = Rng::derive_seed(seed, 8);

  SynthSuiteConfig sc;
  sc.train_tasks = 2;
  sc.dev_tasks = 1;
  sc.test_tasks = 1;
  sc.pool_per_class = 8;
  sc.train_feature_dim = 4;
  sc.test_feature_dim = 4;
  sc.seed = Rng::derive_seed(seed, 9);
  SynthSuite suite = build_synth_suite(sc, views);

  auto run = [&] {
    ModelParams model = init_model_params(enc, views, tc.head, tc.seed);
    TrainResult result = meta_train(suite.train, suite.dev, model, enc, tc);
    return std::make_pair(model.store.snapshot(), result);
  };
  auto [params_a, result_a] = run();
  auto [params_b, result_b] = run();
  for (std::size_t i = 0; i < params_a.size() && s.pass; ++i)
    s.check(params_a[i] == params_b[i], "parameters diverged between identical runs");
  s.check(result_a.history.size() == result_b.history.size(), "history length differs");
  for (std::size_t i = 0; i < result_a.history.size() && s.pass; ++i)
    s.check(result_a.history[i].train_loss == result_b.history[i].train_loss,
            "loss history diverged");
  if (s.pass)
    s.detail = "two identical runs are bit-identical";
  return s;
}

Suite degree_encoding_norms(bool quick, std::uint64_t seed) {
  Suite s;
  Rng rng(Rng::derive_seed(seed, 10));
  const int graphs = quick ? 10 : 40;
  for (int i = 0; i < graphs && s.pass; ++i) {
    Graph g = random_connected_graph(rng, 2, 20);
    Eigen::MatrixXd u = degree_encoding(g, 16);
    for (Eigen::Index v = 0; v < u.rows(); ++v)
      s.check(std::abs(u.row(v).squaredNorm() - 8.0) <= 1e-12,
              "degree encoding row norm off");
  }
  if (s.pass)
    s.detail = "||U[v]||^2 == d_u/2 within 1e-12";
  return s;
}

Suite centrality_equivariance(bool quick, std::uint64_t seed) {
  Suite s;
  Rng rng(Rng::derive_seed(seed, 11));
  const int graphs = quick ? 10 : 40;
  for (int i = 0; i < graphs && s.pass; ++i) {
    Graph g = random_connected_graph(rng, 3, 16);
    auto perm = random_permutation(rng, g.num_nodes());
    Graph pg = permute_graph(g, perm);
    auto a = harmonic_centrality(g);
    auto b = harmonic_centrality(pg);
    for (NodeIndex v = 0; v < g.num_nodes(); ++v)
      s.check(a[static_cast<std::size_t>(v)] == b[static_cast<std::size_t>(perm[v])],
              "centrality not permutation-equivariant");
  }
  if (s.pass)
    s.detail = "relabeling permutes scores exactly";
  return s;
}

} // namespace

std::vector<VerifyResult> run_verify_suites(bool quick, std::uint64_t seed) {
  std::vector<std::pair<std::string, std::function<Suite()>>> suites = {
      {"spectral-oracle", [&] { return spectral_oracle(quick, seed); }},
      {"exact-small-spectra", [&] { return exact_spectra(seed); }},
      {"gradient-checks", [&] { return gradient_suite(quick, seed); }},
      {"encoder-permutation-invariance", [&] { return encoder_invariance(quick, seed); }},
      {"simplex-properties", [&] { return simplex_properties(quick, seed); }},
      {"xavier-moments", [&] { return xavier_moments(seed); }},
      {"episode-disjointness", [&] { return episode_disjointness(quick, seed); }},
      {"train-determinism", [&] { return train_determinism(seed); }},
      {"degree-encoding-norms", [&] { return degree_encoding_norms(quick, seed); }},
      {"centrality-equivariance", [&] { return centrality_equivariance(quick, seed); }},
  };

  std::vector<VerifyResult> results;
  for (auto& [name, fn] : suites) {
    VerifyResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      Suite s = fn();
      r.pass = s.pass;
      r.detail = s.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

bool all_passed(const std::vector<VerifyResult>& results) {
  for (const auto& r : results)
    if (!r.pass)
      return false;
  return true;
}

} // namespace metaview
