#include "metaview/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace metaview {

Csr Csr::from_edges(NodeIndex n, const std::vector<std::pair<NodeIndex, NodeIndex>>& edges) {
  if (n < 0)
    fail(Errc::value, "negative node count");
  std::set<std::pair<NodeIndex, NodeIndex>> unique;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      fail(Errc::value, "edge endpoint out of range");
    unique.emplace(std::min(u, v), std::max(u, v));
  }
  std::vector<std::vector<NodeIndex>> nbr(static_cast<std::size_t>(n));
  for (auto [u, v] : unique) {
    nbr[u].push_back(v);
    if (u != v)
      nbr[v].push_back(u);
  }
  Csr out;
  out.row_ptr_.assign(1, 0);
  out.row_ptr_.reserve(static_cast<std::size_t>(n) + 1);
  for (NodeIndex v = 0; v < n; ++v) {
    auto& list = nbr[v];
    std::sort(list.begin(), list.end());
    out.col_.insert(out.col_.end(), list.begin(), list.end());
    out.row_ptr_.push_back(static_cast<std::int64_t>(out.col_.size()));
  }
  out.num_edges_ = static_cast<std::int64_t>(unique.size());
  return out;
}

std::int64_t Csr::max_degree() const {
  std::int64_t best = 0;
  for (NodeIndex v = 0; v < num_nodes(); ++v)
    best = std::max(best, degree(v));
  return best;
}

std::vector<std::pair<NodeIndex, NodeIndex>> Csr::edge_list() const {
  std::vector<std::pair<NodeIndex, NodeIndex>> out;
  out.reserve(static_cast<std::size_t>(num_edges_));
  for (NodeIndex v = 0; v < num_nodes(); ++v)
    for (NodeIndex u : neighbors(v))
      if (v <= u)
        out.emplace_back(v, u);
  return out;
}

void Graph::check_invariants() const {
  const NodeIndex n = num_nodes();
  if (n < 1)
    fail(Errc::value, "graph must have at least one node");
  if (features.rows() != n)
    fail(Errc::value, "feature row count does not match node count");
  if (node_labels && static_cast<NodeIndex>(node_labels->size()) != n)
    fail(Errc::value, "node label count does not match node count");
  for (NodeIndex v = 0; v < n; ++v)
    for (NodeIndex u : adj.neighbors(v))
      if (u < 0 || u >= n)
        fail(Errc::value, "edge endpoint out of range");
}

void FilterLimits::validate() const {
  if (max_degree <= 0 || max_feature_dim <= 0 || min_nodes < 2 || min_edges <= 0 ||
      max_nodes_before_subsample <= 0)
    fail(Errc::value, "filter limits must be positive with min_nodes >= 2");
}

const char* to_string(DropReason r) {
  switch (r) {
  case DropReason::none: return "none";
  case DropReason::degree: return "degree";
  case DropReason::feature_dim: return "feature_dim";
  case DropReason::min_nodes: return "min_nodes";
  case DropReason::min_edges: return "min_edges";
  case DropReason::disconnected: return "disconnected";
  }
  return "?";
}

FilterVerdict filter_graph(const Graph& g, const FilterLimits& limits) {
  limits.validate();
  if (g.adj.max_degree() > limits.max_degree)
    return {false, DropReason::degree};
  if (g.feature_dim() > limits.max_feature_dim)
    return {false, DropReason::feature_dim};
  if (g.num_nodes() < limits.min_nodes)
    return {false, DropReason::min_nodes};
  if (g.num_edges() < limits.min_edges)
    return {false, DropReason::min_edges};
  if (!is_connected(g.adj))
    return {false, DropReason::disconnected};
  return {true, DropReason::none};
}

std::vector<std::int64_t> bfs_distances(const Csr& adj, NodeIndex source) {
  std::vector<std::int64_t> dist(static_cast<std::size_t>(adj.num_nodes()), -1);
  std::deque<NodeIndex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    NodeIndex v = queue.front();
    queue.pop_front();
    for (NodeIndex u : adj.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

bool is_connected(const Csr& adj) {
  if (adj.num_nodes() == 0)
    return false;
  auto dist = bfs_distances(adj, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::int64_t d) { return d < 0; });
}

std::vector<int> connected_components(const Csr& adj, int* num_components) {
  const NodeIndex n = adj.num_nodes();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (NodeIndex s = 0; s < n; ++s) {
    if (comp[s] >= 0)
      continue;
    comp[s] = next;
    std::deque<NodeIndex> queue{s};
    while (!queue.empty()) {
      NodeIndex v = queue.front();
      queue.pop_front();
      for (NodeIndex u : adj.neighbors(v)) {
        if (comp[u] < 0) {
          comp[u] = next;
          queue.push_back(u);
        }
      }
    }
    ++next;
  }
  if (num_components)
    *num_components = next;
  return comp;
}

std::vector<double> harmonic_centrality(const Graph& g) {
  if (!is_connected(g.adj))
    fail(Errc::value, "harmonic_centrality requires a connected graph");
  const NodeIndex n = g.num_nodes();
  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  std::vector<std::int64_t> hist;
  for (NodeIndex v = 0; v < n; ++v) {
    auto dist = bfs_distances(g.adj, v);
    // summing the per-distance histogram in ascending order keeps the float
    // accumulation independent of node labeling (scores are exactly
    // permutation-equivariant)
    hist.assign(static_cast<std::size_t>(n), 0);
    for (NodeIndex u = 0; u < n; ++u)
      if (u != v)
        ++hist[static_cast<std::size_t>(dist[u])];
    double s = 0.0;
    for (std::size_t d = 1; d < hist.size(); ++d)
      if (hist[d] > 0)
        s += static_cast<double>(hist[d]) / static_cast<double>(d);
    score[v] = s;
  }
  return score;
}

namespace {

Graph induced_subgraph(const Graph& g, const std::vector<NodeIndex>& keep_sorted) {
  std::vector<NodeIndex> new_id(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t i = 0; i < keep_sorted.size(); ++i)
    new_id[keep_sorted[i]] = static_cast<NodeIndex>(i);
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  for (NodeIndex v : keep_sorted)
    for (NodeIndex u : g.adj.neighbors(v))
      if (new_id[u] >= 0 && v <= u)
        edges.emplace_back(new_id[v], new_id[u]);
  Graph out;
  out.adj = Csr::from_edges(static_cast<NodeIndex>(keep_sorted.size()), edges);
  out.features.resize(static_cast<Eigen::Index>(keep_sorted.size()), g.features.cols());
  for (std::size_t i = 0; i < keep_sorted.size(); ++i)
    out.features.row(static_cast<Eigen::Index>(i)) = g.features.row(keep_sorted[i]);
  if (g.raw_attributes) {
    Eigen::MatrixXd raw(static_cast<Eigen::Index>(keep_sorted.size()),
                        g.raw_attributes->cols());
    for (std::size_t i = 0; i < keep_sorted.size(); ++i)
      raw.row(static_cast<Eigen::Index>(i)) = g.raw_attributes->row(keep_sorted[i]);
    out.raw_attributes = std::move(raw);
  }
  if (g.node_labels) {
    std::vector<int> labels(keep_sorted.size());
    for (std::size_t i = 0; i < keep_sorted.size(); ++i)
      labels[i] = (*g.node_labels)[keep_sorted[i]];
    out.node_labels = std::move(labels);
  }
  out.label = g.label;
  out.origin_id = g.origin_id;
  out.feature_source = g.feature_source;
  return out;
}

} // namespace

Graph subsample_top_nodes(const Graph& g, std::int64_t k) {
  if (k < 2)
    fail(Errc::value, "subsample size must be at least 2");
  if (g.num_nodes() <= k)
    return g;

  auto score = harmonic_centrality(g);
  std::vector<NodeIndex> order(static_cast<std::size_t>(g.num_nodes()));
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<NodeIndex>(i);
  // highest centrality first, ties broken by ascending original index
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    if (score[a] != score[b])
      return score[a] > score[b];
    return a < b;
  });
  std::vector<NodeIndex> keep(order.begin(), order.begin() + k);
  std::sort(keep.begin(), keep.end());

  Graph induced = induced_subgraph(g, keep);
  int num_comp = 0;
  auto comp = connected_components(induced.adj, &num_comp);
  if (num_comp > 1) {
    // largest component; ties resolved by the component holding the lowest
    // index, which is the lower component id by construction
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(num_comp), 0);
    for (int c : comp)
      sizes[c] += 1;
    int best = 0;
    for (int c = 1; c < num_comp; ++c)
      if (sizes[c] > sizes[best])
        best = c;
    std::vector<NodeIndex> keep2;
    for (NodeIndex v = 0; v < induced.num_nodes(); ++v)
      if (comp[v] == best)
        keep2.push_back(v);
    induced = induced_subgraph(induced, keep2);
  }
  if (induced.num_nodes() < 2 || induced.num_edges() < 1)
    fail(Errc::value, "subsample produced a degenerate graph");
  return induced;
}

Graph permute_graph(const Graph& g, const std::vector<NodeIndex>& perm) {
  const NodeIndex n = g.num_nodes();
  if (static_cast<NodeIndex>(perm.size()) != n)
    fail(Errc::value, "permutation size mismatch");
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  for (auto [u, v] : g.adj.edge_list())
    edges.emplace_back(perm[u], perm[v]);
  Graph out;
  out.adj = Csr::from_edges(n, edges);
  out.features.resize(g.features.rows(), g.features.cols());
  for (NodeIndex v = 0; v < n; ++v)
    out.features.row(perm[v]) = g.features.row(v);
  if (g.raw_attributes) {
    Eigen::MatrixXd raw(g.raw_attributes->rows(), g.raw_attributes->cols());
    for (NodeIndex v = 0; v < n; ++v)
      raw.row(perm[v]) = g.raw_attributes->row(v);
    out.raw_attributes = std::move(raw);
  }
  if (g.node_labels) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (NodeIndex v = 0; v < n; ++v)
      labels[perm[v]] = (*g.node_labels)[v];
    out.node_labels = std::move(labels);
  }
  out.label = g.label;
  out.origin_id = g.origin_id;
  out.feature_source = g.feature_source;
  return out;
}

Eigen::MatrixXd canonicalize_features(const std::optional<Eigen::MatrixXd>& attributes,
                                      const std::optional<std::vector<int>>& labels,
                                      NodeIndex n_nodes) {
  if (attributes) {
    Eigen::MatrixXd out = *attributes;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      double norm = out.row(r).cwiseAbs().sum();
      if (norm > 0.0)
        out.row(r) /= norm;
    }
    return out;
  }
  if (labels) {
    std::vector<int> distinct(*labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::map<int, Eigen::Index> column;
    for (std::size_t i = 0; i < distinct.size(); ++i)
      column[distinct[i]] = static_cast<Eigen::Index>(i);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels->size()),
                                                static_cast<Eigen::Index>(distinct.size()));
    for (std::size_t r = 0; r < labels->size(); ++r)
      out(static_cast<Eigen::Index>(r), column[(*labels)[r]]) = 1.0; // one-hot row, L1 norm 1
    return out;
  }
  return Eigen::MatrixXd::Ones(n_nodes, 16);
}

} // namespace metaview
