#ifndef METAVIEW_TUDATASET_HPP_
#define METAVIEW_TUDATASET_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "metaview/graph.hpp"

namespace metaview {

/// Loads a dataset in the TUDataset flat-file layout from
/// `directory/<name>_A.txt` etc. Mandatory files: _A.txt (1-indexed
/// "i, j" pairs, both directions present for undirected edges),
/// _graph_indicator.txt, _graph_labels.txt. Optional: _node_labels.txt,
/// _node_attributes.txt. LF or CRLF line endings accepted.
///
/// Node indices are re-based to 0 per graph, origin_id is the 0-based
/// position in the file order, and node features are produced by
/// canonicalize_features over the whole dataset so the feature space is
/// shared across graphs.
std::vector<Graph> load_tudataset(const std::filesystem::path& directory,
                                  const std::string& name);

/// Writes graphs back to the same layout (edges in both directions,
/// 1-indexed). Node labels are written when every graph carries them;
/// attributes are written when the features originated from attributes.
/// Attribute values use enough digits to round-trip doubles exactly.
void save_tudataset(const std::vector<Graph>& graphs, const std::filesystem::path& directory,
                    const std::string& name);

/// Applies filter_graph to every graph, subsampling graphs above
/// limits.max_nodes_before_subsample first. Returns survivors; drop reasons
/// are appended to `drop_log` as "origin_id:reason" when non-null.
std::vector<Graph> preprocess_dataset(std::vector<Graph> graphs, const FilterLimits& limits,
                                      std::vector<std::string>* drop_log = nullptr);

} // namespace metaview

#endif // METAVIEW_TUDATASET_HPP_
