#include "metaview/tudataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace metaview {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& file, bool required) {
  std::ifstream in(file);
  if (!in) {
    if (required)
      fail(Errc::ingest, "missing mandatory dataset file: " + file.string());
    return {};
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(line);
  }
  // trailing blank lines are tolerated
  while (!lines.empty() && lines.back().empty())
    lines.pop_back();
  return lines;
}

std::int64_t parse_int(const std::string& text, const std::string& file, std::size_t line_no) {
  std::int64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t'))
    ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  while (ptr < end && (*ptr == ' ' || *ptr == '\t'))
    ++ptr;
  if (ec != std::errc() || ptr != end)
    fail(Errc::dataset_format,
         file + ":" + std::to_string(line_no) + ": expected an integer, got '" + text + "'");
  return value;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_real(const std::string& text, const std::string& file, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    while (used < text.size() && (text[used] == ' ' || text[used] == '\t'))
      ++used;
    if (used != text.size())
      throw std::invalid_argument("trailing garbage");
    return v;
  } catch (const std::exception&) {
    fail(Errc::dataset_format,
         file + ":" + std::to_string(line_no) + ": expected a real number, got '" + text + "'");
  }
}

} // namespace

std::vector<Graph> load_tudataset(const std::filesystem::path& directory,
                                  const std::string& name) {
  const auto path = [&](const char* suffix) { return directory / (name + suffix); };

  auto indicator_lines = read_lines(path("_graph_indicator.txt"), true);
  auto edge_lines = read_lines(path("_A.txt"), true);
  auto label_lines = read_lines(path("_graph_labels.txt"), true);
  auto node_label_lines = read_lines(path("_node_labels.txt"), false);
  auto attr_lines = read_lines(path("_node_attributes.txt"), false);

  const std::int64_t total_nodes = static_cast<std::int64_t>(indicator_lines.size());
  const std::int64_t num_graphs = static_cast<std::int64_t>(label_lines.size());
  if (num_graphs == 0)
    fail(Errc::dataset_format, name + "_graph_labels.txt is empty");

  // graph id per node (1-indexed in the file)
  std::vector<std::int64_t> graph_of(static_cast<std::size_t>(total_nodes));
  std::vector<std::int64_t> nodes_per_graph(static_cast<std::size_t>(num_graphs), 0);
  std::vector<NodeIndex> local_id(static_cast<std::size_t>(total_nodes));
  const std::string indicator_file = name + "_graph_indicator.txt";
  for (std::int64_t i = 0; i < total_nodes; ++i) {
    std::int64_t gid = parse_int(indicator_lines[i], indicator_file, i + 1);
    if (gid < 1 || gid > num_graphs)
      fail(Errc::dataset_format, indicator_file + ":" + std::to_string(i + 1) +
                                     ": graph id " + std::to_string(gid) + " out of range");
    graph_of[i] = gid - 1;
    local_id[i] = nodes_per_graph[gid - 1]++;
  }
  for (std::int64_t g = 0; g < num_graphs; ++g)
    if (nodes_per_graph[g] == 0)
      fail(Errc::dataset_format, name + ": graph " + std::to_string(g + 1) + " has no nodes");

  // edges, re-based to per-graph 0-indexed ids
  std::vector<std::vector<std::pair<NodeIndex, NodeIndex>>> edges(
      static_cast<std::size_t>(num_graphs));
  const std::string edge_file = name + "_A.txt";
  for (std::size_t ln = 0; ln < edge_lines.size(); ++ln) {
    if (edge_lines[ln].empty())
      continue;
    auto parts = split_commas(edge_lines[ln]);
    if (parts.size() != 2)
      fail(Errc::dataset_format,
           edge_file + ":" + std::to_string(ln + 1) + ": expected 'i, j'");
    std::int64_t a = parse_int(parts[0], edge_file, ln + 1);
    std::int64_t b = parse_int(parts[1], edge_file, ln + 1);
    if (a < 1 || a > total_nodes || b < 1 || b > total_nodes)
      fail(Errc::dataset_format, edge_file + ":" + std::to_string(ln + 1) +
                                     ": edge references unknown node");
    if (graph_of[a - 1] != graph_of[b - 1])
      fail(Errc::dataset_format, edge_file + ":" + std::to_string(ln + 1) +
                                     ": edge endpoints belong to different graphs");
    edges[graph_of[a - 1]].emplace_back(local_id[a - 1], local_id[b - 1]);
  }

  // optional per-node data
  std::optional<std::vector<int>> all_node_labels;
  if (!node_label_lines.empty()) {
    if (static_cast<std::int64_t>(node_label_lines.size()) != total_nodes)
      fail(Errc::dataset_format, name + "_node_labels.txt: expected " +
                                     std::to_string(total_nodes) + " lines");
    std::vector<int> labels(static_cast<std::size_t>(total_nodes));
    for (std::int64_t i = 0; i < total_nodes; ++i)
      labels[i] = static_cast<int>(
          parse_int(node_label_lines[i], name + "_node_labels.txt", i + 1));
    all_node_labels = std::move(labels);
  }
  std::optional<Eigen::MatrixXd> all_attrs;
  if (!attr_lines.empty()) {
    if (static_cast<std::int64_t>(attr_lines.size()) != total_nodes)
      fail(Errc::dataset_format, name + "_node_attributes.txt: expected " +
                                     std::to_string(total_nodes) + " lines");
    const std::string attr_file = name + "_node_attributes.txt";
    auto first = split_commas(attr_lines[0]);
    Eigen::MatrixXd attrs(total_nodes, static_cast<Eigen::Index>(first.size()));
    for (std::int64_t i = 0; i < total_nodes; ++i) {
      auto parts = split_commas(attr_lines[i]);
      if (parts.size() != first.size())
        fail(Errc::dataset_format,
             attr_file + ":" + std::to_string(i + 1) + ": ragged attribute row");
      for (std::size_t c = 0; c < parts.size(); ++c)
        attrs(i, static_cast<Eigen::Index>(c)) = parse_real(parts[c], attr_file, i + 1);
    }
    all_attrs = std::move(attrs);
  }

  // dataset-wide feature canonicalization keeps a shared feature space
  Eigen::MatrixXd all_features = canonicalize_features(all_attrs, all_node_labels, total_nodes);
  FeatureSource source = all_attrs      ? FeatureSource::attributes
                         : all_node_labels ? FeatureSource::label_onehot
                                           : FeatureSource::default_ones;

  std::vector<Graph> graphs(static_cast<std::size_t>(num_graphs));
  std::vector<Eigen::Index> next_row(static_cast<std::size_t>(num_graphs), 0);
  for (std::int64_t g = 0; g < num_graphs; ++g) {
    graphs[g].adj = Csr::from_edges(nodes_per_graph[g], edges[g]);
    graphs[g].features.resize(nodes_per_graph[g], all_features.cols());
    if (all_node_labels)
      graphs[g].node_labels.emplace(static_cast<std::size_t>(nodes_per_graph[g]));
    graphs[g].label =
        static_cast<int>(parse_int(label_lines[g], name + "_graph_labels.txt", g + 1));
    graphs[g].origin_id = g;
    graphs[g].feature_source = source;
  }
  if (all_attrs)
    for (std::int64_t g = 0; g < num_graphs; ++g)
      graphs[g].raw_attributes.emplace(nodes_per_graph[g], all_attrs->cols());
  for (std::int64_t i = 0; i < total_nodes; ++i) {
    Graph& g = graphs[graph_of[i]];
    g.features.row(next_row[graph_of[i]]) = all_features.row(i);
    if (all_attrs)
      g.raw_attributes->row(next_row[graph_of[i]]) = all_attrs->row(i);
    if (all_node_labels)
      (*g.node_labels)[next_row[graph_of[i]]] = (*all_node_labels)[i];
    ++next_row[graph_of[i]];
  }
  for (auto& g : graphs)
    g.check_invariants();
  return graphs;
}

void save_tudataset(const std::vector<Graph>& graphs, const std::filesystem::path& directory,
                    const std::string& name) {
  std::filesystem::create_directories(directory);
  const auto open = [&](const char* suffix) {
    std::ofstream out(directory / (name + suffix));
    if (!out)
      fail(Errc::ingest, "cannot write " + (directory / (name + suffix)).string());
    return out;
  };

  bool all_node_labels = !graphs.empty();
  bool write_attrs = !graphs.empty();
  for (const auto& g : graphs) {
    all_node_labels = all_node_labels && g.node_labels.has_value();
    write_attrs = write_attrs && g.feature_source == FeatureSource::attributes &&
                  g.raw_attributes.has_value();
  }

  auto a_file = open("_A.txt");
  auto ind_file = open("_graph_indicator.txt");
  auto label_file = open("_graph_labels.txt");

  std::int64_t base = 0; // global 1-indexed node offset
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    for (auto [u, v] : g.adj.edge_list()) {
      a_file << base + u + 1 << ", " << base + v + 1 << "\n";
      if (u != v)
        a_file << base + v + 1 << ", " << base + u + 1 << "\n";
    }
    for (NodeIndex v = 0; v < g.num_nodes(); ++v)
      ind_file << gi + 1 << "\n";
    label_file << g.label << "\n";
    base += g.num_nodes();
  }

  if (all_node_labels) {
    auto nl_file = open("_node_labels.txt");
    for (const auto& g : graphs)
      for (int l : *g.node_labels)
        nl_file << l << "\n";
  }
  if (write_attrs) {
    auto at_file = open("_node_attributes.txt");
    char buf[64];
    for (const auto& g : graphs) {
      const Eigen::MatrixXd& raw = *g.raw_attributes;
      for (Eigen::Index r = 0; r < raw.rows(); ++r) {
        for (Eigen::Index c = 0; c < raw.cols(); ++c) {
          std::snprintf(buf, sizeof(buf), "%.17g", raw(r, c));
          at_file << (c ? ", " : "") << buf;
        }
        at_file << "\n";
      }
    }
  }
}

std::vector<Graph> preprocess_dataset(std::vector<Graph> graphs, const FilterLimits& limits,
                                      std::vector<std::string>* drop_log) {
  std::vector<Graph> kept;
  kept.reserve(graphs.size());
  for (auto& g : graphs) {
    if (g.num_nodes() > limits.max_nodes_before_subsample && is_connected(g.adj)) {
      try {
        g = subsample_top_nodes(g, limits.max_nodes_before_subsample);
      } catch (const Error&) {
        if (drop_log)
          drop_log->push_back(std::to_string(g.origin_id) + ":subsample_degenerate");
        continue;
      }
    }
    auto verdict = filter_graph(g, limits);
    if (verdict.keep) {
      kept.push_back(std::move(g));
    } else if (drop_log) {
      drop_log->push_back(std::to_string(g.origin_id) + ":" + to_string(verdict.reason));
    }
  }
  return kept;
}

} // namespace metaview
