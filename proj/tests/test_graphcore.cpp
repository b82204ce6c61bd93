#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <set>

#include "metaview/tudataset.hpp"
#include "test_util.hpp"

using namespace metaview;
using namespace metaview::testutil;

TEST_CASE("csr symmetrizes and deduplicates") {
  Csr adj = Csr::from_edges(3, {{0, 1}, {1, 0}, {1, 2}});
  CHECK(adj.num_edges() == 2);
  CHECK(adj.degree(1) == 2);
  CHECK(adj.degree(0) == 1);
  auto edges = adj.edge_list();
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == std::pair<NodeIndex, NodeIndex>{0, 1});
}

TEST_CASE("filter_graph applies rules in fixed order") {
  FilterLimits limits;

  SUBCASE("star with center degree 51 drops on degree") {
    Graph g;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    for (NodeIndex v = 1; v <= 51; ++v)
      edges.emplace_back(0, v);
    g.adj = Csr::from_edges(52, edges);
    g.features = Eigen::MatrixXd::Ones(52, 2);
    auto verdict = filter_graph(g, limits);
    CHECK_FALSE(verdict.keep);
    CHECK(verdict.reason == DropReason::degree);
  }
  SUBCASE("connected triangle with d_x=3 keeps") {
    Graph g = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, 3);
    auto verdict = filter_graph(g, limits);
    CHECK(verdict.keep);
    CHECK(verdict.reason == DropReason::none);
  }
  SUBCASE("two disjoint edges drop as disconnected") {
    Graph g = graph_from_edges(4, {{0, 1}, {2, 3}});
    auto verdict = filter_graph(g, limits);
    CHECK_FALSE(verdict.keep);
    CHECK(verdict.reason == DropReason::disconnected);
  }
  SUBCASE("wide features drop before node-count rules") {
    Graph g;
    g.adj = Csr::from_edges(1, {});
    g.features = Eigen::MatrixXd::Ones(1, 101);
    auto verdict = filter_graph(g, limits);
    CHECK(verdict.reason == DropReason::feature_dim);
  }
  SUBCASE("verdict is a pure predicate") {
    Graph g = graph_from_edges(4, {{0, 1}, {2, 3}});
    auto a = filter_graph(g, limits);
    auto b = filter_graph(g, limits);
    CHECK(a.keep == b.keep);
    CHECK(a.reason == b.reason);
  }
}

TEST_CASE("harmonic centrality matches the BFS oracle") {
  SUBCASE("path a-b-c") {
    auto scores = harmonic_centrality(path3());
    CHECK(scores[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(scores[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(scores[2] == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("complete graph K4") {
    Graph g = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    for (double s : harmonic_centrality(g))
      CHECK(s == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("star S4: center 3.0, leaves 2.0") {
    Graph g = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    auto scores = harmonic_centrality(g);
    CHECK(scores[0] == doctest::Approx(3.0).epsilon(1e-12));
    for (int v = 1; v < 4; ++v)
      CHECK(scores[v] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("disconnected input is rejected") {
    Graph g = graph_from_edges(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(harmonic_centrality(g), Error);
  }
  SUBCASE("permutation equivariance is exact") {
    Rng rng(11);
    for (int i = 0; i < 25; ++i) {
      Graph g = random_connected(rng, 3, 20);
      auto perm = random_perm(rng, g.num_nodes());
      auto a = harmonic_centrality(g);
      auto b = harmonic_centrality(permute_graph(g, perm));
      for (NodeIndex v = 0; v < g.num_nodes(); ++v)
        CHECK(a[static_cast<std::size_t>(v)] == b[static_cast<std::size_t>(perm[v])]);
    }
  }
}

TEST_CASE("subsample_top_nodes") {
  SUBCASE("identity when n <= k") {
    SynthParams p{.n = 10};
    Graph g = synth_graph(SynthFamily::cycle, p, 0);
    Graph out = subsample_top_nodes(g, 500);
    CHECK(out.num_nodes() == 10);
    CHECK(out.adj == g.adj);
  }
  SUBCASE("n=700 connected graph cut to 500 stays connected") {
    SynthParams p;
    p.n = 700;
    p.p = 0.008;
    Graph g = synth_graph(SynthFamily::erdos_renyi, p, 3);
    REQUIRE(is_connected(g.adj));
    Graph out = subsample_top_nodes(g, 500);
    CHECK(out.num_nodes() <= 500);
    CHECK(out.num_nodes() >= 2);
    CHECK(is_connected(out.adj));
  }
  SUBCASE("path a-b-c with k=2 keeps the center and the lower endpoint") {
    Graph out = subsample_top_nodes(path3(), 2);
    CHECK(out.num_nodes() == 2);
    CHECK(out.num_edges() == 1);
    // selected original nodes are b (highest centrality) and a (tie at 1.5
    // broken by ascending index)
  }
  SUBCASE("features and labels follow the kept nodes") {
    Graph g = path3();
    g.features << 0, 0, 1, 1, 2, 2;
    g.node_labels = std::vector<int>{7, 8, 9};
    Graph out = subsample_top_nodes(g, 2);
    REQUIRE(out.node_labels.has_value());
    std::set<int> labels(out.node_labels->begin(), out.node_labels->end());
    CHECK(labels == std::set<int>{7, 8});
  }
}

TEST_CASE("canonicalize_features") {
  SUBCASE("attribute rows are L1-normalized") {
    Eigen::MatrixXd attrs(2, 2);
    attrs << 2, 2, 0, 0;
    auto out = canonicalize_features(attrs, std::nullopt, 2);
    CHECK(out(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out(1, 0) == 0.0); // zero rows pass through
  }
  SUBCASE("labels only become one-hot") {
    auto out = canonicalize_features(std::nullopt, std::vector<int>{0, 1, 1}, 3);
    REQUIRE(out.cols() == 2);
    CHECK(out(1, 0) == 0.0);
    CHECK(out(1, 1) == 1.0);
  }
  SUBCASE("neither gives 16 ones") {
    auto out = canonicalize_features(std::nullopt, std::nullopt, 3);
    CHECK(out.rows() == 3);
    CHECK(out.cols() == 16);
    CHECK(out.minCoeff() == 1.0);
  }
  SUBCASE("nonzero rows have unit L1 norm") {
    Rng rng(5);
    Eigen::MatrixXd attrs(20, 6);
    for (Eigen::Index i = 0; i < attrs.size(); ++i)
      attrs(i / 6, i % 6) = rng.normal();
    auto out = canonicalize_features(attrs, std::nullopt, 20);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      CHECK(out.row(r).cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("tudataset ingestion") {
  SUBCASE("minimal two-node dataset") {
    TempDir dir("tu-min");
    std::ofstream(dir.path() / "DS_A.txt") << "1, 2\n2, 1\n";
    std::ofstream(dir.path() / "DS_graph_indicator.txt") << "1\n1\n";
    std::ofstream(dir.path() / "DS_graph_labels.txt") << "0\n";
    auto graphs = load_tudataset(dir.path(), "DS");
    REQUIRE(graphs.size() == 1);
    CHECK(graphs[0].num_nodes() == 2);
    CHECK(graphs[0].num_edges() == 1);
    CHECK(graphs[0].feature_dim() == 16); // no attributes, no labels
  }
  SUBCASE("missing mandatory file names the file") {
    TempDir dir("tu-missing");
    std::ofstream(dir.path() / "DS_A.txt") << "1, 2\n";
    std::ofstream(dir.path() / "DS_graph_labels.txt") << "0\n";
    CHECK_THROWS_WITH_AS(load_tudataset(dir.path(), "DS"),
                         doctest::Contains("DS_graph_indicator.txt"), Error);
  }
  SUBCASE("edge referencing unknown node reports the line") {
    TempDir dir("tu-badedge");
    std::ofstream(dir.path() / "DS_A.txt") << "1, 2\n2, 1\n1, 9\n";
    std::ofstream(dir.path() / "DS_graph_indicator.txt") << "1\n1\n";
    std::ofstream(dir.path() / "DS_graph_labels.txt") << "0\n";
    CHECK_THROWS_WITH_AS(load_tudataset(dir.path(), "DS"), doctest::Contains("DS_A.txt:3"),
                         Error);
  }
  SUBCASE("CRLF input is accepted") {
    TempDir dir("tu-crlf");
    std::ofstream(dir.path() / "DS_A.txt") << "1, 2\r\n2, 1\r\n";
    std::ofstream(dir.path() / "DS_graph_indicator.txt") << "1\r\n1\r\n";
    std::ofstream(dir.path() / "DS_graph_labels.txt") << "0\r\n";
    CHECK(load_tudataset(dir.path(), "DS").size() == 1);
  }
  SUBCASE("self-loops present in the source are kept") {
    TempDir dir("tu-loop");
    std::ofstream(dir.path() / "DS_A.txt") << "1, 1\n1, 2\n2, 1\n";
    std::ofstream(dir.path() / "DS_graph_indicator.txt") << "1\n1\n";
    std::ofstream(dir.path() / "DS_graph_labels.txt") << "0\n";
    auto graphs = load_tudataset(dir.path(), "DS");
    REQUIRE(graphs.size() == 1);
    CHECK(graphs[0].num_edges() == 2); // the loop counts as one edge
    CHECK(graphs[0].adj.degree(0) == 2);
    CHECK(graphs[0].adj.degree(1) == 1);
  }
}

namespace {

// deterministic MUTAG-like corpus: 188 small labeled graphs, node labels,
// no attributes
std::vector<Graph> mutag_like_corpus() {
  std::vector<Graph> graphs;
  Rng rng(188);
  for (int i = 0; i < 188; ++i) {
    SynthParams p;
    p.n = rng.uniform_int(5, 16);
    Graph g = synth_graph(SynthFamily::tree, p, rng.next_u64());
    std::vector<int> labels(static_cast<std::size_t>(g.num_nodes()));
    for (auto& l : labels)
      l = static_cast<int>(rng.uniform_index(7));
    g.node_labels = labels;
    g.features = canonicalize_features(std::nullopt, labels, g.num_nodes());
    g.feature_source = FeatureSource::label_onehot;
    g.label = static_cast<int>(rng.uniform_index(2));
    g.origin_id = i;
    graphs.push_back(std::move(g));
  }
  return graphs;
}

std::size_t count_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    ++n;
  return n;
}

} // namespace

TEST_CASE("MUTAG-layout fixture: 188 graphs with one-hot features") {
  TempDir dir("tu-mutag");
  save_tudataset(mutag_like_corpus(), dir.path(), "MUTAGLIKE");

  // line-count oracle over the written flat files
  CHECK(count_lines(dir.path() / "MUTAGLIKE_graph_labels.txt") == 188);
  const std::size_t node_lines = count_lines(dir.path() / "MUTAGLIKE_graph_indicator.txt");
  CHECK(count_lines(dir.path() / "MUTAGLIKE_node_labels.txt") == node_lines);

  auto graphs = load_tudataset(dir.path(), "MUTAGLIKE");
  REQUIRE(graphs.size() == 188);
  std::size_t total_nodes = 0;
  for (const auto& g : graphs) {
    total_nodes += static_cast<std::size_t>(g.num_nodes());
    for (Eigen::Index r = 0; r < g.features.rows(); ++r) {
      CHECK(g.features.row(r).sum() == 1.0); // one-hot rows
      CHECK(g.features.row(r).maxCoeff() == 1.0);
    }
  }
  CHECK(total_nodes == node_lines);
}

TEST_CASE("ingestion round trip is exact") {
  Rng rng(77);
  std::vector<Graph> original;
  for (int i = 0; i < 12; ++i) {
    Graph g = random_connected(rng, 3, 12, 3);
    // attribute-backed features, raw values retained for serialization
    g.raw_attributes = g.features;
    g.features = canonicalize_features(g.features, std::nullopt, g.num_nodes());
    g.feature_source = FeatureSource::attributes;
    g.label = static_cast<int>(rng.uniform_index(3));
    g.origin_id = i;
    original.push_back(std::move(g));
  }
  TempDir dir("tu-roundtrip");
  save_tudataset(original, dir.path(), "RT");
  auto reloaded = load_tudataset(dir.path(), "RT");
  REQUIRE(reloaded.size() == original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(reloaded[i].adj == original[i].adj);
    CHECK(reloaded[i].features == original[i].features); // exact, 17-digit round trip
    CHECK(reloaded[i].label == original[i].label);
  }
}

TEST_CASE("synthetic generators") {
  SUBCASE("cycle C5") {
    SynthParams p{.n = 5};
    Graph g = synth_graph(SynthFamily::cycle, p, 0);
    CHECK(g.num_nodes() == 5);
    CHECK(g.num_edges() == 5);
    for (NodeIndex v = 0; v < 5; ++v)
      CHECK(g.adj.degree(v) == 2);
  }
  SUBCASE("erdos_renyi is deterministic in the seed") {
    SynthParams p;
    p.n = 20;
    p.p = 0.3;
    Graph a = synth_graph(SynthFamily::erdos_renyi, p, 7);
    Graph b = synth_graph(SynthFamily::erdos_renyi, p, 7);
    CHECK(a.adj == b.adj);
    Graph c = synth_graph(SynthFamily::erdos_renyi, p, 8);
    CHECK(a.adj.edge_list() != c.adj.edge_list());
  }
  SUBCASE("barabasi_albert edge count is m*(n-m)") {
    SynthParams p;
    p.n = 30;
    p.m = 2;
    Graph g = synth_graph(SynthFamily::barabasi_albert, p, 1);
    CHECK(g.num_nodes() == 30);
    CHECK(g.num_edges() == 2 * (30 - 2)); // star seed m + (n-m-1)*m
    CHECK(is_connected(g.adj));
  }
  SUBCASE("generators satisfy the default filters") {
    Rng rng(9);
    FilterLimits limits;
    for (int i = 0; i < 30; ++i) {
      Graph g = random_connected(rng, 4, 30);
      CHECK(filter_graph(g, limits).keep);
    }
  }
  SUBCASE("parameter validation") {
    SynthParams bad{.n = 2};
    CHECK_THROWS_AS(synth_graph(SynthFamily::cycle, bad, 0), Error);
    SynthParams bad_p;
    bad_p.n = 5;
    bad_p.p = 1.5;
    CHECK_THROWS_AS(synth_graph(SynthFamily::erdos_renyi, bad_p, 0), Error);
  }
}
