#include "metaview/benchbuild.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "metaview/rng.hpp"

namespace metaview {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string fnv1a64_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

SourceDataset load_source_dataset(const std::filesystem::path& directory,
                                  const std::string& name, const std::string& meta_domain,
                                  const FilterLimits& limits) {
  SourceDataset ds;
  ds.name = name;
  ds.meta_domain = meta_domain;
  auto raw = load_tudataset(directory, name);
  const std::size_t raw_count = raw.size();
  ds.graphs = preprocess_dataset(std::move(raw), limits);

  const auto sidecar = directory / (name + "_task_labels.txt");
  std::ifstream in(sidecar);
  if (in) {
    std::vector<std::vector<int>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line.empty())
        continue;
      std::vector<int> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ','))
        row.push_back(std::stoi(cell));
      rows.push_back(std::move(row));
    }
    if (rows.size() != raw_count)
      fail(Errc::dataset_format, sidecar.string() + ": expected one row per graph (" +
                                     std::to_string(raw_count) + ")");
    Eigen::MatrixXi labels(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size())
        fail(Errc::dataset_format, sidecar.string() + ": ragged row " + std::to_string(r + 1));
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        labels(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    ds.multitask = std::move(labels);
  }
  return ds;
}

namespace {

void warn(std::vector<std::string>* warnings, const std::string& message) {
  if (warnings)
    warnings->push_back(message);
}

bool enough_per_class(const std::array<std::vector<std::int64_t>, 2>& members) {
  return members[0].size() >= kMinUsablePerClass && members[1].size() >= kMinUsablePerClass;
}

} // namespace

std::vector<SingleTaskDataset> split_multitask(const SourceDataset& ds, std::uint64_t seed,
                                               std::vector<std::string>* warnings) {
  if (!ds.multitask)
    fail(Errc::benchmark, ds.name + ": split_multitask needs task label columns");
  const Eigen::Index t_count = ds.multitask->cols();

  // seeded balanced partition: each graph goes to the usable column that
  // currently holds the fewest graphs
  std::vector<std::size_t> order(ds.graphs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(Rng::derive_seed(seed, fnv1a64(ds.name)));
  rng.shuffle(order);

  std::vector<std::vector<std::size_t>> assigned(static_cast<std::size_t>(t_count));
  for (std::size_t gi : order) {
    const auto origin = ds.graphs[gi].origin_id;
    Eigen::Index best = -1;
    for (Eigen::Index t = 0; t < t_count; ++t) {
      if ((*ds.multitask)(origin, t) < 0)
        continue;
      if (best < 0 || assigned[t].size() < assigned[best].size())
        best = t;
    }
    if (best >= 0)
      assigned[best].push_back(gi);
  }

  std::vector<SingleTaskDataset> out;
  for (Eigen::Index t = 0; t < t_count; ++t) {
    SingleTaskDataset task;
    task.task_id = ds.name + "#t" + std::to_string(t);
    task.origin = ds.name;
    task.meta_domain = ds.meta_domain;
    task.class_pair = {0, 1};
    for (std::size_t gi : assigned[t]) {
      const auto origin = ds.graphs[gi].origin_id;
      const int label = (*ds.multitask)(origin, t);
      if (label == 0 || label == 1)
        task.members[static_cast<std::size_t>(label)].push_back(origin);
    }
    for (auto& m : task.members)
      std::sort(m.begin(), m.end());
    if (!enough_per_class(task.members)) {
      warn(warnings, task.task_id + ": skipped, a class has fewer than " +
                         std::to_string(kMinUsablePerClass) + " usable samples");
      continue;
    }
    out.push_back(std::move(task));
  }
  return out;
}

std::vector<SingleTaskDataset> split_multiclass(const SourceDataset& ds, std::uint64_t seed,
                                                std::vector<std::string>* warnings) {
  std::map<int, std::vector<std::int64_t>> by_class;
  for (const auto& g : ds.graphs)
    by_class[g.label].push_back(g.origin_id);
  if (by_class.size() < 3)
    fail(Errc::benchmark, ds.name + ": split_multiclass needs at least three classes");

  std::vector<int> classes;
  for (const auto& [label, members] : by_class)
    classes.push_back(label);
  Rng rng(Rng::derive_seed(seed, fnv1a64(ds.name)));
  rng.shuffle(classes);

  std::vector<SingleTaskDataset> out;
  for (std::size_t i = 0; i + 1 < classes.size(); i += 2) {
    const int a = classes[i], b = classes[i + 1];
    SingleTaskDataset task;
    task.task_id = ds.name + "#c" + std::to_string(a) + "v" + std::to_string(b);
    task.origin = ds.name;
    task.meta_domain = ds.meta_domain;
    task.class_pair = {a, b};
    task.members[0] = by_class[a];
    task.members[1] = by_class[b];
    if (!enough_per_class(task.members)) {
      warn(warnings, task.task_id + ": skipped, a class has fewer than " +
                         std::to_string(kMinUsablePerClass) + " samples");
      continue;
    }
    out.push_back(std::move(task));
  }
  return out;
}

std::vector<SingleTaskDataset> single_task_datasets(const SourceDataset& ds,
                                                    std::uint64_t seed,
                                                    std::vector<std::string>* warnings) {
  if (ds.multitask)
    return split_multitask(ds, seed, warnings);
  std::map<int, std::vector<std::int64_t>> by_class;
  for (const auto& g : ds.graphs)
    by_class[g.label].push_back(g.origin_id);
  if (by_class.size() > 2)
    return split_multiclass(ds, seed, warnings);
  if (by_class.size() < 2) {
    warn(warnings, ds.name + ": skipped, needs two classes");
    return {};
  }
  SingleTaskDataset task;
  task.task_id = ds.name;
  task.origin = ds.name;
  task.meta_domain = ds.meta_domain;
  auto it = by_class.begin();
  task.class_pair[0] = it->first;
  task.members[0] = it->second;
  ++it;
  task.class_pair[1] = it->first;
  task.members[1] = it->second;
  if (!enough_per_class(task.members)) {
    warn(warnings, task.task_id + ": skipped, a class has fewer than " +
                       std::to_string(kMinUsablePerClass) + " samples");
    return {};
  }
  return {std::move(task)};
}

TaskManifest build_task(const SingleTaskDataset& task, std::uint64_t seed) {
  TaskManifest manifest;
  manifest.task_id = task.task_id;
  manifest.source_dataset = task.origin;
  manifest.meta_domain = task.meta_domain;
  manifest.class_pair = task.class_pair;
  manifest.seed = seed;
  Rng rng(Rng::derive_seed(seed, fnv1a64(task.task_id)));
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const auto& pool = task.members[cls];
    if (pool.size() < kMinUsablePerClass)
      fail(Errc::benchmark, task.task_id + ": class " +
                                std::to_string(task.class_pair[cls]) + " has " +
                                std::to_string(pool.size()) + " samples, needs " +
                                std::to_string(kMinUsablePerClass));
    auto picks = rng.sample_indices(pool.size(), kMinUsablePerClass);
    for (int i = 0; i < kSupportPerClass; ++i)
      manifest.support_ids[cls].push_back(pool[picks[static_cast<std::size_t>(i)]]);
    for (int i = kSupportPerClass; i < kMinUsablePerClass; ++i)
      manifest.query_ids[cls].push_back(pool[picks[static_cast<std::size_t>(i)]]);
  }
  return manifest;
}

namespace {

/// Picks a subset of origin groups whose sizes sum to `target`, preferring
/// origins earlier in the given order. Returns indices or nullopt.
std::optional<std::vector<std::size_t>> pick_exact(const std::vector<std::size_t>& sizes,
                                                   int target) {
  if (target == 0)
    return std::vector<std::size_t>{};
  if (target < 0)
    return std::nullopt;
  // 0/1 subset-sum with predecessor tracking; the descending inner loop
  // keeps each origin usable at most once, first-found states keep the
  // earliest (seeded-order) solution
  const std::size_t t = static_cast<std::size_t>(target);
  constexpr int kUnreached = -2, kStart = -1;
  std::vector<int> parent(t + 1, kUnreached);
  parent[0] = kStart;
  std::vector<std::size_t> previous(t + 1, 0);
  for (std::size_t i = 0; i < sizes.size() && parent[t] == kUnreached; ++i) {
    const std::size_t w = sizes[i];
    if (w == 0 || w > t)
      continue;
    for (std::size_t s = t; s >= w; --s) {
      if (parent[s] == kUnreached && parent[s - w] != kUnreached) {
        parent[s] = static_cast<int>(i);
        previous[s] = s - w;
      }
      if (s == w)
        break;
    }
  }
  if (parent[t] == kUnreached)
    return std::nullopt;
  std::vector<std::size_t> picked;
  for (std::size_t s = t; parent[s] != kStart; s = previous[s])
    picked.push_back(static_cast<std::size_t>(parent[s]));
  std::reverse(picked.begin(), picked.end());
  return picked;
}

} // namespace

BenchmarkManifest assemble_benchmark(const std::vector<TaskManifest>& source_tasks,
                                     const std::vector<TaskManifest>& target_tasks,
                                     const std::string& name, const std::string& source_domain,
                                     const std::string& target_domain, std::uint64_t seed,
                                     const AssembleOptions& options) {
  BenchmarkManifest manifest;
  manifest.name = name;
  manifest.source_domain = source_domain;
  manifest.target_domain = target_domain;
  manifest.seed = seed;
  manifest.tool_version = kToolVersion;
  manifest.tasks = source_tasks;
  manifest.tasks.insert(manifest.tasks.end(), target_tasks.begin(), target_tasks.end());

  // group source tasks by origin, first-appearance order
  std::vector<std::string> origins;
  std::map<std::string, std::vector<std::string>> tasks_of;
  for (const auto& t : source_tasks) {
    if (!tasks_of.count(t.source_dataset))
      origins.push_back(t.source_dataset);
    tasks_of[t.source_dataset].push_back(t.task_id);
  }

  // quotas drive the seeded allocation of non-pinned origins; pinned origins
  // sit on top of them
  const int dev_needed = options.dev_tasks;
  const int test_needed = target_tasks.empty() ? options.test_tasks : 0;

  for (const auto& t : target_tasks)
    manifest.test.push_back(t.task_id);

  std::vector<std::string> open_origins;
  for (const auto& origin : origins) {
    auto hint = options.origin_splits.find(origin);
    if (hint == options.origin_splits.end()) {
      open_origins.push_back(origin);
      continue;
    }
    auto& ids = tasks_of[origin];
    switch (hint->second) {
    case Split::train:
      manifest.train.insert(manifest.train.end(), ids.begin(), ids.end());
      break;
    case Split::dev:
      manifest.dev.insert(manifest.dev.end(), ids.begin(), ids.end());
      break;
    case Split::test:
      manifest.test.insert(manifest.test.end(), ids.begin(), ids.end());
      break;
    }
  }

  Rng rng(Rng::derive_seed(seed, 0xa110ULL));
  rng.shuffle(open_origins);
  std::vector<std::size_t> sizes;
  for (const auto& origin : open_origins)
    sizes.push_back(tasks_of[origin].size());

  auto list_origins = [&] {
    std::string out;
    for (const auto& origin : open_origins)
      out += (out.empty() ? "" : ", ") + origin + "(" +
             std::to_string(tasks_of[origin].size()) + ")";
    return out;
  };

  auto dev_pick = pick_exact(sizes, dev_needed);
  if (!dev_pick)
    fail(Errc::benchmark, name + ": no origin-atomic allocation reaches " +
                              std::to_string(dev_needed) + " dev tasks; origins: " +
                              list_origins());
  std::set<std::size_t> taken(dev_pick->begin(), dev_pick->end());
  for (std::size_t i : *dev_pick) {
    auto& ids = tasks_of[open_origins[i]];
    manifest.dev.insert(manifest.dev.end(), ids.begin(), ids.end());
  }

  if (test_needed > 0) {
    std::vector<std::size_t> rest_sizes;
    std::vector<std::size_t> rest_index;
    for (std::size_t i = 0; i < open_origins.size(); ++i) {
      if (!taken.count(i)) {
        rest_sizes.push_back(sizes[i]);
        rest_index.push_back(i);
      }
    }
    auto test_pick = pick_exact(rest_sizes, test_needed);
    if (!test_pick)
      fail(Errc::benchmark, name + ": no origin-atomic allocation reaches " +
                                std::to_string(test_needed) + " test tasks; origins: " +
                                list_origins());
    for (std::size_t j : *test_pick) {
      taken.insert(rest_index[j]);
      auto& ids = tasks_of[open_origins[rest_index[j]]];
      manifest.test.insert(manifest.test.end(), ids.begin(), ids.end());
    }
  }

  for (std::size_t i = 0; i < open_origins.size(); ++i) {
    if (taken.count(i))
      continue;
    auto& ids = tasks_of[open_origins[i]];
    manifest.train.insert(manifest.train.end(), ids.begin(), ids.end());
  }
  return manifest;
}

std::vector<DatasetListing> read_dataset_listing(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    fail(Errc::config, "cannot open datasets file: " + file.string());
  std::vector<DatasetListing> listing;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t");
      const auto b = cell.find_last_not_of(" \t");
      cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    if (cells.size() < 2 || cells[0].empty() || cells[1].empty())
      fail(Errc::config, file.string() + ":" + std::to_string(line_no) +
                             ": expected 'name, meta_domain[, split]'");
    DatasetListing entry;
    entry.name = cells[0];
    entry.meta_domain = cells[1];
    if (cells.size() >= 3 && !cells[2].empty() && cells[2] != "auto") {
      if (cells[2] == "train")
        entry.split = Split::train;
      else if (cells[2] == "dev")
        entry.split = Split::dev;
      else if (cells[2] == "test")
        entry.split = Split::test;
      else
        fail(Errc::config, file.string() + ":" + std::to_string(line_no) +
                               ": split must be train|dev|test|auto");
    }
    listing.push_back(std::move(entry));
  }
  return listing;
}

BenchmarkManifest build_benchmark_from_listing(const std::vector<DatasetListing>& listing,
                                               const std::filesystem::path& data_dir,
                                               const std::string& name,
                                               const std::string& source_domain,
                                               const std::string& target_domain,
                                               std::uint64_t seed, AssembleOptions options) {
  std::vector<std::string> warnings;
  std::vector<TaskManifest> source_tasks, target_tasks;
  for (const auto& entry : listing) {
    if (entry.split)
      options.origin_splits[entry.name] = *entry.split;
    SourceDataset ds =
        load_source_dataset(data_dir / entry.name, entry.name, entry.meta_domain);
    for (const auto& single : single_task_datasets(ds, seed, &warnings)) {
      TaskManifest manifest = build_task(single, seed);
      const bool is_target =
          entry.meta_domain == target_domain && target_domain != source_domain;
      (is_target ? target_tasks : source_tasks).push_back(std::move(manifest));
    }
  }
  BenchmarkManifest manifest = assemble_benchmark(source_tasks, target_tasks, name,
                                                  source_domain, target_domain, seed, options);
  manifest.warnings = std::move(warnings);
  validate_benchmark(manifest);
  return manifest;
}

void validate_benchmark(const BenchmarkManifest& manifest) {
  std::map<std::string, const TaskManifest*> by_id;
  for (const auto& t : manifest.tasks) {
    if (!by_id.emplace(t.task_id, &t).second)
      fail(Errc::benchmark, "duplicate task id: " + t.task_id);
  }

  std::map<std::string, std::string> split_of;
  auto record = [&](const std::vector<std::string>& ids, const char* split) {
    for (const auto& id : ids) {
      if (!by_id.count(id))
        fail(Errc::benchmark, std::string("split references unknown task: ") + id);
      if (!split_of.emplace(id, split).second)
        fail(Errc::benchmark, "task appears in two splits: " + id);
    }
  };
  record(manifest.train, "train");
  record(manifest.dev, "dev");
  record(manifest.test, "test");
  if (split_of.size() != manifest.tasks.size())
    fail(Errc::benchmark, "some tasks are missing from the splits");

  // origin-atomicity
  std::map<std::string, std::string> origin_split;
  for (const auto& [id, split] : split_of) {
    const auto& origin = by_id[id]->source_dataset;
    auto [it, inserted] = origin_split.emplace(origin, split);
    if (!inserted && it->second != split)
      fail(Errc::benchmark, "origin " + origin + " spans splits " + it->second + " and " +
                                split);
  }

  // per-task disjointness and global per-origin sample disjointness
  std::map<std::string, std::set<std::int64_t>> used;
  for (const auto& t : manifest.tasks) {
    std::set<std::int64_t> mine;
    for (const auto& side : {t.support_ids, t.query_ids})
      for (const auto& cls : side)
        for (std::int64_t id : cls)
          if (!mine.insert(id).second)
            fail(Errc::benchmark, t.task_id + ": sample " + std::to_string(id) +
                                      " appears twice within the task");
    auto& origin_used = used[t.source_dataset];
    for (std::int64_t id : mine)
      if (!origin_used.insert(id).second)
        fail(Errc::benchmark, t.task_id + ": sample " + std::to_string(id) +
                                  " is shared with another task of " + t.source_dataset);
  }
}

namespace {

nlohmann::ordered_json task_to_json(const TaskManifest& t) {
  nlohmann::ordered_json doc;
  doc["task_id"] = t.task_id;
  doc["source_dataset"] = t.source_dataset;
  doc["meta_domain"] = t.meta_domain;
  doc["class_pair"] = t.class_pair;
  doc["seed"] = t.seed;
  doc["support_ids"] = t.support_ids;
  doc["query_ids"] = t.query_ids;
  return doc;
}

TaskManifest task_from_json(const nlohmann::json& doc) {
  TaskManifest t;
  t.task_id = doc.at("task_id").get<std::string>();
  t.source_dataset = doc.at("source_dataset").get<std::string>();
  t.meta_domain = doc.at("meta_domain").get<std::string>();
  t.class_pair = doc.at("class_pair").get<std::array<int, 2>>();
  t.seed = doc.at("seed").get<std::uint64_t>();
  t.support_ids = doc.at("support_ids").get<std::array<std::vector<std::int64_t>, 2>>();
  t.query_ids = doc.at("query_ids").get<std::array<std::vector<std::int64_t>, 2>>();
  return t;
}

} // namespace

std::string benchmark_to_json(const BenchmarkManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["version"] = manifest.tool_version.empty() ? kToolVersion : manifest.tool_version;
  doc["name"] = manifest.name;
  doc["source_domain"] = manifest.source_domain;
  doc["target_domain"] = manifest.target_domain;
  doc["seed"] = manifest.seed;
  doc["tasks"] = nlohmann::ordered_json::array();
  for (const auto& t : manifest.tasks)
    doc["tasks"].push_back(task_to_json(t));
  doc["splits"] = {{"train", manifest.train}, {"dev", manifest.dev}, {"test", manifest.test}};
  doc["warnings"] = manifest.warnings;
  return doc.dump(2) + "\n";
}

BenchmarkManifest benchmark_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ingest, std::string("manifest is not valid JSON: ") + e.what());
  }
  BenchmarkManifest manifest;
  try {
    manifest.tool_version = doc.at("version").get<std::string>();
    manifest.name = doc.at("name").get<std::string>();
    manifest.source_domain = doc.at("source_domain").get<std::string>();
    manifest.target_domain = doc.at("target_domain").get<std::string>();
    manifest.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& t : doc.at("tasks"))
      manifest.tasks.push_back(task_from_json(t));
    manifest.train = doc.at("splits").at("train").get<std::vector<std::string>>();
    manifest.dev = doc.at("splits").at("dev").get<std::vector<std::string>>();
    manifest.test = doc.at("splits").at("test").get<std::vector<std::string>>();
    manifest.warnings = doc.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ingest, std::string("manifest is missing fields: ") + e.what());
  }
  return manifest;
}

void save_benchmark(const BenchmarkManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    fail(Errc::ingest, "cannot write manifest: " + path.string());
  out << benchmark_to_json(manifest);
}

BenchmarkManifest load_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(Errc::ingest, "cannot open manifest: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return benchmark_from_json(buffer.str());
}

std::string benchmark_hash(const BenchmarkManifest& manifest) {
  return fnv1a64_hex(benchmark_to_json(manifest));
}

BundleIndex index_dataset(const SourceDataset& ds, const ViewConfig& views) {
  BundleIndex index;
  for (const auto& g : ds.graphs)
    index.emplace(g.origin_id, std::make_shared<const ViewBundle>(build_views(g, views)));
  return index;
}

std::vector<TaskData> tasks_from_manifest(const BenchmarkManifest& manifest,
                                          const std::vector<std::string>& task_ids,
                                          const DatasetBundles& data) {
  std::map<std::string, const TaskManifest*> by_id;
  for (const auto& t : manifest.tasks)
    by_id[t.task_id] = &t;

  std::vector<std::string> missing;
  std::vector<TaskData> out;
  for (const auto& id : task_ids) {
    auto found = by_id.find(id);
    if (found == by_id.end()) {
      missing.push_back(id);
      continue;
    }
    const TaskManifest& t = *found->second;
    auto ds = data.find(t.source_dataset);
    if (ds == data.end()) {
      missing.push_back(id + " (dataset " + t.source_dataset + ")");
      continue;
    }
    TaskData task;
    task.task_id = t.task_id;
    task.meta_domain = t.meta_domain;
    task.class_labels = {t.class_pair[0], t.class_pair[1]};
    task.support_pool.resize(2);
    task.query_pool.resize(2);
    task.pool.resize(2);
    bool complete = true;
    auto resolve = [&](const std::vector<std::int64_t>& ids,
                       std::vector<TaskSample>& into) {
      for (std::int64_t sample : ids) {
        auto bundle = ds->second.find(sample);
        if (bundle == ds->second.end()) {
          missing.push_back(id + " (sample " + std::to_string(sample) + ")");
          complete = false;
          return;
        }
        into.push_back({bundle->second, sample});
      }
    };
    for (std::size_t cls = 0; cls < 2 && complete; ++cls) {
      resolve(t.support_ids[cls], task.support_pool[cls]);
      if (complete)
        resolve(t.query_ids[cls], task.query_pool[cls]);
    }
    if (complete)
      out.push_back(std::move(task));
  }
  if (!missing.empty()) {
    std::string joined;
    for (const auto& m : missing)
      joined += (joined.empty() ? "" : ", ") + m;
    fail(Errc::benchmark, "cannot resolve tasks: " + joined);
  }
  return out;
}

} // namespace metaview
