#ifndef METAVIEW_SYNTH_HPP_
#define METAVIEW_SYNTH_HPP_

#include <cstdint>
#include <string>

#include "metaview/graph.hpp"

namespace metaview {

enum class SynthFamily { erdos_renyi, barabasi_albert, cycle, tree, star };

SynthFamily synth_family_from_string(const std::string& s);
const char* to_string(SynthFamily f);

enum class SynthFeatures { ones, gaussian };

struct SynthParams {
  std::int64_t n = 10;
  double p = 0.3;        // erdos_renyi edge probability
  std::int64_t m = 2;    // barabasi_albert edges per new node
  SynthFeatures features = SynthFeatures::ones;
  Eigen::Index feature_dim = 16;
  bool connect = true;   // erdos_renyi only: chain components together
};

/// Deterministic generator for test corpora. For fixed (family, params, seed)
/// the edge set and features are identical across runs and platforms.
///
/// Families: erdos_renyi(n, p) with optional component chaining;
/// barabasi_albert(n, m) grown from a star on m+1 nodes with m distinct
/// preferential-attachment targets per new node, giving m*(n-m) edges;
/// cycle(n); tree(n) as a random recursive tree; star(n).
Graph synth_graph(SynthFamily family, const SynthParams& params, std::uint64_t seed);

} // namespace metaview

#endif // METAVIEW_SYNTH_HPP_
