#ifndef METAVIEW_TESTS_TEST_UTIL_HPP_
#define METAVIEW_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <numeric>
#include <string>

#include "metaview/graph.hpp"
#include "metaview/rng.hpp"
#include "metaview/synth.hpp"

namespace metaview::testutil {

inline Graph graph_from_edges(NodeIndex n,
                              const std::vector<std::pair<NodeIndex, NodeIndex>>& edges,
                              Eigen::Index d_x = 2) {
  Graph g;
  g.adj = Csr::from_edges(n, edges);
  g.features = Eigen::MatrixXd::Ones(n, d_x);
  g.origin_id = 0;
  return g;
}

inline Graph path3() { return graph_from_edges(3, {{0, 1}, {1, 2}}); }

inline Graph random_connected(Rng& rng, std::int64_t min_n, std::int64_t max_n,
                              Eigen::Index d_x = 4) {
  SynthParams params;
  params.n = rng.uniform_int(min_n, max_n);
  params.features = SynthFeatures::gaussian;
  params.feature_dim = d_x;
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

inline std::vector<NodeIndex> random_perm(Rng& rng, NodeIndex n) {
  std::vector<NodeIndex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), NodeIndex{0});
  rng.shuffle(perm);
  return perm;
}

/// Unique scratch directory under the build tree; removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("metaview-test-" + tag + "-" + std::to_string(counter()++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path dir_;
};

} // namespace metaview::testutil

#endif // METAVIEW_TESTS_TEST_UTIL_HPP_
