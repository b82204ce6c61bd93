#ifndef METAVIEW_GRAPH_HPP_
#define METAVIEW_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "metaview/common.hpp"

namespace metaview {

using NodeIndex = std::int64_t;

/// Symmetric adjacency in compressed-sparse-row form. Each undirected edge
/// {u, v} with u != v appears in both rows; a self-loop appears once.
class Csr {
public:
  Csr() = default;

  /// Builds from an undirected edge list; duplicate pairs are collapsed.
  static Csr from_edges(NodeIndex n, const std::vector<std::pair<NodeIndex, NodeIndex>>& edges);

  NodeIndex num_nodes() const { return static_cast<NodeIndex>(row_ptr_.size()) - 1; }
  std::int64_t num_edges() const { return num_edges_; } // undirected count

  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    return {col_.data() + row_ptr_[v], col_.data() + row_ptr_[v + 1]};
  }
  std::int64_t degree(NodeIndex v) const { return row_ptr_[v + 1] - row_ptr_[v]; }
  std::int64_t max_degree() const;

  /// Unique undirected pairs (u <= v), sorted.
  std::vector<std::pair<NodeIndex, NodeIndex>> edge_list() const;

  bool operator==(const Csr&) const = default;

private:
  std::vector<std::int64_t> row_ptr_ = {0};
  std::vector<NodeIndex> col_;
  std::int64_t num_edges_ = 0;
};

/// Records where a graph's node features came from, so a dataset can be
/// serialized back to the flat-file layout without re-normalization drift.
enum class FeatureSource { attributes, label_onehot, default_ones };

struct Graph {
  Csr adj;
  Eigen::MatrixXd features; // n x d_x, canonicalized
  /// Attributes as ingested, before row normalization; kept so datasets
  /// serialize back bit-exactly.
  std::optional<Eigen::MatrixXd> raw_attributes;
  std::optional<std::vector<int>> node_labels;
  int label = 0;
  std::int64_t origin_id = -1; // stable sample identity within a dataset
  FeatureSource feature_source = FeatureSource::default_ones;

  NodeIndex num_nodes() const { return adj.num_nodes(); }
  std::int64_t num_edges() const { return adj.num_edges(); }
  Eigen::Index feature_dim() const { return features.cols(); }

  /// Throws Errc::value if a structural invariant is violated.
  void check_invariants() const;
};

struct FilterLimits {
  std::int64_t max_degree = 50;
  std::int64_t max_feature_dim = 100;
  std::int64_t min_nodes = 2;
  std::int64_t min_edges = 1;
  std::int64_t max_nodes_before_subsample = 500;

  void validate() const;
};

enum class DropReason { none, degree, feature_dim, min_nodes, min_edges, disconnected };

struct FilterVerdict {
  bool keep = true;
  DropReason reason = DropReason::none;
};

const char* to_string(DropReason r);

/// Keep-or-drop with the first violated rule in the fixed order
/// degree, feature_dim, min_nodes, min_edges, disconnected.
FilterVerdict filter_graph(const Graph& g, const FilterLimits& limits);

/// BFS distances from source; unreachable nodes get -1.
std::vector<std::int64_t> bfs_distances(const Csr& adj, NodeIndex source);

bool is_connected(const Csr& adj);

/// Connected components; returns component id per node, ids ordered by the
/// lowest node index contained in each component.
std::vector<int> connected_components(const Csr& adj, int* num_components);

/// score(v) = sum over u != v of 1/dist(u, v), unweighted shortest paths.
/// Throws Errc::value on disconnected input.
std::vector<double> harmonic_centrality(const Graph& g);

/// Induced subgraph on the k nodes of highest harmonic centrality (ties by
/// ascending node index), restricted to its largest connected component.
/// Identity when n <= k. Throws Errc::value if the result degenerates to
/// fewer than 2 nodes or 0 edges.
Graph subsample_top_nodes(const Graph& g, std::int64_t k);

/// Relabels nodes: node v of the input becomes perm[v] in the output.
Graph permute_graph(const Graph& g, const std::vector<NodeIndex>& perm);

/// Row-normalization and fallback rules for initial node features:
/// attributes -> each row divided by its L1 norm (zero rows pass through);
/// labels only -> one-hot over the sorted distinct label set, normalized;
/// neither -> n x 16 matrix of ones.
Eigen::MatrixXd canonicalize_features(const std::optional<Eigen::MatrixXd>& attributes,
                                      const std::optional<std::vector<int>>& labels,
                                      NodeIndex n_nodes);

} // namespace metaview

#endif // METAVIEW_GRAPH_HPP_
