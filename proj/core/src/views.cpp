#include "metaview/views.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "metaview/rng.hpp"

namespace metaview {

ContextualMode contextual_mode_from_string(const std::string& s) {
  if (s == "pad") return ContextualMode::pad;
  if (s == "deepset") return ContextualMode::deepset;
  if (s == "hetero_concat") return ContextualMode::hetero_concat;
  fail(Errc::config, "unknown contextual mode: " + s);
}

DiffusionKind diffusion_kind_from_string(const std::string& s) {
  if (s == "ppr") return DiffusionKind::ppr;
  if (s == "heat") return DiffusionKind::heat;
  fail(Errc::config, "unknown diffusion kind: " + s);
}

const char* to_string(ContextualMode m) {
  switch (m) {
  case ContextualMode::pad: return "pad";
  case ContextualMode::deepset: return "deepset";
  case ContextualMode::hetero_concat: return "hetero_concat";
  }
  return "?";
}

const char* to_string(DiffusionKind k) {
  return k == DiffusionKind::ppr ? "ppr" : "heat";
}

void ViewConfig::validate() const {
  if (d_pad < 1 || d_u < 2 || d_z < 1)
    fail(Errc::config, "view dimensions must be positive");
  if (d_u % 2 != 0)
    fail(Errc::config, "d_u must be even");
  if (alpha <= 0.0 || alpha >= 1.0)
    fail(Errc::config, "teleport probability must lie in (0, 1)");
  if (heat_t <= 0.0)
    fail(Errc::config, "heat diffusion time must be positive");
  if (series_truncation < 0)
    fail(Errc::config, "series truncation must be non-negative");
}

Eigen::MatrixXd pad_features(const Eigen::MatrixXd& X, Eigen::Index d_pad) {
  if (X.cols() > d_pad)
    fail(Errc::dimension, "pad_features: feature width exceeds pad width");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), d_pad);
  out.leftCols(X.cols()) = X;
  return out;
}

Eigen::MatrixXd deepset_features(const Eigen::MatrixXd& X, const DeepsetMap& map,
                                 Eigen::Index d_pad) {
  if (map.w.size() != d_pad || map.b.size() != d_pad)
    fail(Errc::dimension, "deepset_features: map width mismatch");
  // sum over feature dims commutes with the shared linear map
  Eigen::VectorXd row_sums = X.rowwise().sum();
  Eigen::MatrixXd out(X.rows(), d_pad);
  const double d_x = static_cast<double>(X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r)
    out.row(r) = (map.w * row_sums(r) + d_x * map.b).transpose();
  return out;
}

Eigen::MatrixXd hetero_concat_features(const Eigen::MatrixXd& X, const LinearMap& map,
                                       Eigen::Index d_pad) {
  const Eigen::Index d_x = X.cols();
  const Eigen::Index d_p = map.W.cols();
  if (map.W.rows() != d_x)
    fail(Errc::dimension, "hetero_concat_features: projection input width mismatch");
  if (d_x + d_p > d_pad)
    fail(Errc::dimension, "hetero_concat_features: widths exceed pad width");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), d_pad);
  out.leftCols(d_x) = X;
  out.middleCols(d_x, d_p) = (X * map.W).rowwise() + map.b;
  return out;
}

Eigen::MatrixXd degree_encoding(const Graph& g, Eigen::Index d_u) {
  if (d_u < 2 || d_u % 2 != 0)
    fail(Errc::dimension, "degree encoding width must be even and >= 2");
  const NodeIndex n = g.num_nodes();
  Eigen::MatrixXd U(n, d_u);
  for (NodeIndex v = 0; v < n; ++v) {
    const double deg = static_cast<double>(g.adj.degree(v));
    for (Eigen::Index i = 0; i < d_u / 2; ++i) {
      const double scale =
          std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(d_u));
      U(v, 2 * i) = std::sin(deg / scale);
      U(v, 2 * i + 1) = std::cos(deg / scale);
    }
  }
  return U;
}

namespace {

// Eigenvalues of D^-1/2 A D^-1/2, which is similar to the transition matrix
// T = A D^-1 and therefore shares its real spectrum in [-1, 1].
Eigen::VectorXd transition_eigenvalues(const Graph& g) {
  const NodeIndex n = g.num_nodes();
  Eigen::VectorXd inv_sqrt_deg(n);
  for (NodeIndex v = 0; v < n; ++v) {
    const auto deg = g.adj.degree(v);
    if (deg == 0)
      fail(Errc::value, "diffusion requires every node to have degree >= 1");
    inv_sqrt_deg(v) = 1.0 / std::sqrt(static_cast<double>(deg));
  }
  Eigen::MatrixXd t_sym = Eigen::MatrixXd::Zero(n, n);
  for (NodeIndex v = 0; v < n; ++v)
    for (NodeIndex u : g.adj.neighbors(v))
      t_sym(v, u) = inv_sqrt_deg(v) * inv_sqrt_deg(u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t_sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(Errc::numeric, "eigensolver failed to converge on a " + std::to_string(n) +
                            "-node graph (symmetric normalized adjacency)");
  return solver.eigenvalues();
}

Eigen::VectorXd sort_pad_truncate(std::vector<double> mu, Eigen::Index d_z) {
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d_z);
  const Eigen::Index take = std::min<Eigen::Index>(d_z, static_cast<Eigen::Index>(mu.size()));
  for (Eigen::Index i = 0; i < take; ++i)
    z(i) = mu[static_cast<std::size_t>(i)];
  return z;
}

} // namespace

Eigen::VectorXd diffusion_spectrum(const Graph& g, const ViewConfig& cfg) {
  cfg.validate();
  if (!is_connected(g.adj))
    fail(Errc::value, "diffusion_spectrum requires a connected graph");
  Eigen::VectorXd lambda = transition_eigenvalues(g);
  std::vector<double> mu(static_cast<std::size_t>(lambda.size()));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double l = std::clamp(lambda(i), -1.0, 1.0);
    mu[static_cast<std::size_t>(i)] = cfg.diffusion_kind == DiffusionKind::ppr
                                          ? cfg.alpha / (1.0 - (1.0 - cfg.alpha) * l)
                                          : std::exp(cfg.heat_t * (l - 1.0));
  }
  return sort_pad_truncate(std::move(mu), cfg.d_z);
}

Eigen::VectorXd diffusion_spectrum_series_reference(const Graph& g, const ViewConfig& cfg) {
  cfg.validate();
  if (!is_connected(g.adj))
    fail(Errc::value, "diffusion series requires a connected graph");
  const NodeIndex n = g.num_nodes();

  // T = A D^-1, column-stochastic
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (NodeIndex u = 0; u < n; ++u) {
    const auto deg = g.adj.degree(u);
    if (deg == 0)
      fail(Errc::value, "diffusion requires every node to have degree >= 1");
    for (NodeIndex v : g.adj.neighbors(u))
      t(v, u) = 1.0 / static_cast<double>(deg);
  }

  const int K = cfg.series_truncation;
  auto theta = [&](int k) {
    if (cfg.diffusion_kind == DiffusionKind::ppr)
      return cfg.alpha * std::pow(1.0 - cfg.alpha, k);
    double c = std::exp(-cfg.heat_t);
    for (int i = 1; i <= k; ++i)
      c *= cfg.heat_t / static_cast<double>(i);
    return c;
  };

  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd s = theta(0) * power;
  for (int k = 1; k <= K; ++k) {
    power = power * t;
    s += theta(k) * power;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(s, false);
  if (solver.info() != Eigen::Success)
    fail(Errc::numeric,
         "general eigensolver failed on the materialized diffusion matrix");
  std::vector<double> mu;
  mu.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ev = solver.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8)
      fail(Errc::numeric, "diffusion matrix produced a complex eigenvalue");
    mu.push_back(ev.real());
  }
  return sort_pad_truncate(std::move(mu), cfg.d_z);
}

ViewBundle build_views(const Graph& g, const ViewConfig& cfg) {
  cfg.validate();
  ViewBundle bundle;
  bundle.adj = std::make_shared<const Csr>(g.adj);

  switch (cfg.contextual_mode) {
  case ContextualMode::pad:
    bundle.contextual = pad_features(g.features, cfg.d_pad);
    break;
  case ContextualMode::deepset: {
    // fixed random projection derived from the augmentation seed
    Rng rng(Rng::derive_seed(cfg.augment_seed, 0x6473ULL)); // "ds"
    DeepsetMap map;
    map.w.resize(cfg.d_pad);
    map.b = Eigen::VectorXd::Zero(cfg.d_pad);
    const double limit = std::sqrt(6.0 / static_cast<double>(1 + cfg.d_pad));
    for (Eigen::Index i = 0; i < cfg.d_pad; ++i)
      map.w(i) = rng.uniform(-limit, limit);
    bundle.contextual = deepset_features(g.features, map, cfg.d_pad);
    break;
  }
  case ContextualMode::hetero_concat: {
    const Eigen::Index d_x = g.features.cols();
    if (d_x >= cfg.d_pad)
      fail(Errc::dimension, "hetero_concat needs d_x < d_pad");
    const Eigen::Index d_p = cfg.d_pad - d_x;
    // projections are keyed by input width so every graph of a dataset
    // shares the same map
    Rng rng(Rng::derive_seed(cfg.augment_seed, 0x6863ULL + static_cast<std::uint64_t>(d_x)));
    LinearMap map;
    map.W.resize(d_x, d_p);
    map.b = Eigen::RowVectorXd::Zero(d_p);
    const double limit = std::sqrt(6.0 / static_cast<double>(d_x + d_p));
    for (Eigen::Index r = 0; r < d_x; ++r)
      for (Eigen::Index c = 0; c < d_p; ++c)
        map.W(r, c) = rng.uniform(-limit, limit);
    bundle.contextual = hetero_concat_features(g.features, map, cfg.d_pad);
    break;
  }
  }

  bundle.topological = degree_encoding(g, cfg.d_u);
  bundle.spectrum = diffusion_spectrum(g, cfg);
  return bundle;
}

} // namespace metaview
