#include "metaview/synth.hpp"

#include <algorithm>
#include <set>

#include "metaview/rng.hpp"

namespace metaview {

SynthFamily synth_family_from_string(const std::string& s) {
  if (s == "erdos_renyi") return SynthFamily::erdos_renyi;
  if (s == "barabasi_albert") return SynthFamily::barabasi_albert;
  if (s == "cycle") return SynthFamily::cycle;
  if (s == "tree") return SynthFamily::tree;
  if (s == "star") return SynthFamily::star;
  fail(Errc::value, "unknown synthetic family: " + s);
}

const char* to_string(SynthFamily f) {
  switch (f) {
  case SynthFamily::erdos_renyi: return "erdos_renyi";
  case SynthFamily::barabasi_albert: return "barabasi_albert";
  case SynthFamily::cycle: return "cycle";
  case SynthFamily::tree: return "tree";
  case SynthFamily::star: return "star";
  }
  return "?";
}

namespace {

using EdgeList = std::vector<std::pair<NodeIndex, NodeIndex>>;

EdgeList erdos_renyi_edges(std::int64_t n, double p, bool connect, Rng& rng) {
  EdgeList edges;
  for (NodeIndex u = 0; u < n; ++u)
    for (NodeIndex v = u + 1; v < n; ++v)
      if (rng.uniform() < p)
        edges.emplace_back(u, v);
  if (connect) {
    Csr adj = Csr::from_edges(n, edges);
    int num_comp = 0;
    auto comp = connected_components(adj, &num_comp);
    if (num_comp > 1) {
      // chain the lowest-index node of each component to the next
      std::vector<NodeIndex> anchor(static_cast<std::size_t>(num_comp), -1);
      for (NodeIndex v = 0; v < n; ++v)
        if (anchor[comp[v]] < 0)
          anchor[comp[v]] = v;
      for (int c = 1; c < num_comp; ++c)
        edges.emplace_back(anchor[c - 1], anchor[c]);
    }
  }
  return edges;
}

EdgeList barabasi_albert_edges(std::int64_t n, std::int64_t m, Rng& rng) {
  // seed star on m+1 nodes: center 0, leaves 1..m
  EdgeList edges;
  std::vector<NodeIndex> targets; // node repeated once per incident edge
  for (NodeIndex v = 1; v <= m; ++v) {
    edges.emplace_back(0, v);
    targets.push_back(0);
    targets.push_back(v);
  }
  for (NodeIndex v = m + 1; v < n; ++v) {
    std::set<NodeIndex> chosen;
    while (static_cast<std::int64_t>(chosen.size()) < m)
      chosen.insert(targets[rng.uniform_index(targets.size())]);
    for (NodeIndex t : chosen) {
      edges.emplace_back(t, v);
      targets.push_back(t);
      targets.push_back(v);
    }
  }
  return edges;
}

EdgeList cycle_edges(std::int64_t n) {
  EdgeList edges;
  for (NodeIndex v = 0; v < n; ++v)
    edges.emplace_back(v, (v + 1) % n);
  return edges;
}

EdgeList tree_edges(std::int64_t n, Rng& rng) {
  // random recursive tree: node v attaches to a uniform earlier node
  EdgeList edges;
  for (NodeIndex v = 1; v < n; ++v)
    edges.emplace_back(static_cast<NodeIndex>(rng.uniform_index(static_cast<std::size_t>(v))), v);
  return edges;
}

EdgeList star_edges(std::int64_t n) {
  EdgeList edges;
  for (NodeIndex v = 1; v < n; ++v)
    edges.emplace_back(0, v);
  return edges;
}

} // namespace

Graph synth_graph(SynthFamily family, const SynthParams& params, std::uint64_t seed) {
  const std::int64_t n = params.n;
  Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(family)));

  EdgeList edges;
  switch (family) {
  case SynthFamily::erdos_renyi:
    if (n < 2 || params.p < 0.0 || params.p > 1.0)
      fail(Errc::value, "erdos_renyi requires n >= 2 and p in [0, 1]");
    edges = erdos_renyi_edges(n, params.p, params.connect, rng);
    break;
  case SynthFamily::barabasi_albert:
    if (params.m < 1 || n < params.m + 1)
      fail(Errc::value, "barabasi_albert requires m >= 1 and n >= m+1");
    edges = barabasi_albert_edges(n, params.m, rng);
    break;
  case SynthFamily::cycle:
    if (n < 3)
      fail(Errc::value, "cycle requires n >= 3");
    edges = cycle_edges(n);
    break;
  case SynthFamily::tree:
    if (n < 2)
      fail(Errc::value, "tree requires n >= 2");
    edges = tree_edges(n, rng);
    break;
  case SynthFamily::star:
    if (n < 2)
      fail(Errc::value, "star requires n >= 2");
    edges = star_edges(n);
    break;
  }

  Graph g;
  g.adj = Csr::from_edges(n, edges);
  if (params.features == SynthFeatures::ones) {
    g.features = Eigen::MatrixXd::Ones(n, params.feature_dim);
    g.feature_source = FeatureSource::default_ones;
  } else {
    g.features.resize(n, params.feature_dim);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < params.feature_dim; ++c)
        g.features(r, c) = rng.normal();
    g.feature_source = FeatureSource::attributes;
  }
  g.check_invariants();
  return g;
}

} // namespace metaview
