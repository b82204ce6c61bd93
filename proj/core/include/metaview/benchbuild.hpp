#ifndef METAVIEW_BENCHBUILD_HPP_
#define METAVIEW_BENCHBUILD_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metaview/episode.hpp"
#include "metaview/tudataset.hpp"

namespace metaview {

inline constexpr int kSupportPerClass = 20;
inline constexpr int kQueryPerClass = 50;
inline constexpr int kMinUsablePerClass = kSupportPerClass + kQueryPerClass;

/// One ingested and preprocessed dataset. `multitask`, when present, holds
/// one row per raw graph (indexed by origin_id) with entries in {0, 1} and
/// -1 for missing labels; it is read from an optional
/// `<name>_task_labels.txt` sidecar (comma-separated values per graph).
struct SourceDataset {
  std::string name;
  std::string meta_domain;
  std::vector<Graph> graphs;
  std::optional<Eigen::MatrixXi> multitask;
};

SourceDataset load_source_dataset(const std::filesystem::path& directory,
                                  const std::string& name, const std::string& meta_domain,
                                  const FilterLimits& limits = {});

/// A binary classification dataset carved out of one source dataset.
/// Members are origin ids grouped by class position (class_pair order).
struct SingleTaskDataset {
  std::string task_id;
  std::string origin;
  std::string meta_domain;
  std::array<int, 2> class_pair = {0, 1}; // original labels
  std::array<std::vector<std::int64_t>, 2> members;
};

/// Multi-task datasets become one binary dataset per label column; graphs
/// are partitioned across columns (seeded, balanced) so no sample is shared.
/// Columns left with fewer than 70 usable samples in a class are skipped
/// with a warning record.
std::vector<SingleTaskDataset> split_multitask(const SourceDataset& ds, std::uint64_t seed,
                                               std::vector<std::string>* warnings);

/// Multi-class datasets become floor(C/2) binary datasets from a seeded
/// random pairing of classes; an odd class is left unused. Pairs with a
/// class below 70 samples are skipped with a warning.
std::vector<SingleTaskDataset> split_multiclass(const SourceDataset& ds, std::uint64_t seed,
                                                std::vector<std::string>* warnings);

/// Dispatch: multitask sidecar -> split_multitask; more than two classes ->
/// split_multiclass; exactly two -> the dataset itself as one task.
std::vector<SingleTaskDataset> single_task_datasets(const SourceDataset& ds,
                                                    std::uint64_t seed,
                                                    std::vector<std::string>* warnings);

struct TaskManifest {
  std::string task_id;
  std::string source_dataset;
  std::string meta_domain;
  std::array<int, 2> class_pair = {0, 1};
  std::array<std::vector<std::int64_t>, 2> support_ids; // 20 per class
  std::array<std::vector<std::int64_t>, 2> query_ids;   // 50 per class
  std::uint64_t seed = 0;
};

/// Seeded selection of 20 support + 50 query samples per class, without
/// replacement. Errc::benchmark if a class has fewer than 70 samples.
TaskManifest build_task(const SingleTaskDataset& task, std::uint64_t seed);

struct BenchmarkManifest {
  std::string name;
  std::string source_domain;
  std::string target_domain;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<TaskManifest> tasks;
  std::vector<std::string> train; // task ids
  std::vector<std::string> dev;
  std::vector<std::string> test;
  std::vector<std::string> warnings;
};

enum class Split { train, dev, test };

struct AssembleOptions {
  /// Task count filled by seeded selection among non-pinned origins.
  int dev_tasks = 5;
  /// Source tasks routed to test by seeded selection; only meaningful when
  /// the target task list is empty (same-domain benchmarks).
  int test_tasks = 0;
  /// Pinned allocations (origin dataset name -> split); these sit on top of
  /// the seeded quotas.
  std::map<std::string, Split> origin_splits;
};

/// Origin-atomic allocation: all tasks carved from one source dataset land
/// in the same split. Target tasks always go to test. Seeded selection picks
/// origin subsets whose task counts hit the requested dev/test sizes
/// exactly; Errc::benchmark with the blocking origins when impossible.
BenchmarkManifest assemble_benchmark(const std::vector<TaskManifest>& source_tasks,
                                     const std::vector<TaskManifest>& target_tasks,
                                     const std::string& name, const std::string& source_domain,
                                     const std::string& target_domain, std::uint64_t seed,
                                     const AssembleOptions& options = {});

/// One row of a datasets listing file: "name, meta_domain[, split]" per
/// line, '#' comments. split is train|dev|test|auto.
struct DatasetListing {
  std::string name;
  std::string meta_domain;
  std::optional<Split> split;
};

std::vector<DatasetListing> read_dataset_listing(const std::filesystem::path& file);

/// Full pipeline: ingest + preprocess every listed dataset from
/// `data_dir/<name>/`, split into binary tasks, select support/query sets,
/// and assemble an origin-atomic benchmark. Datasets whose meta_domain
/// equals target_domain (when it differs from source_domain) provide the
/// meta-test tasks.
BenchmarkManifest build_benchmark_from_listing(const std::vector<DatasetListing>& listing,
                                               const std::filesystem::path& data_dir,
                                               const std::string& name,
                                               const std::string& source_domain,
                                               const std::string& target_domain,
                                               std::uint64_t seed, AssembleOptions options);

/// Consistency scans: origin-atomicity, per-task support/query disjointness,
/// global sample disjointness across tasks of one origin, split coverage.
/// Throws Errc::benchmark on the first violation.
void validate_benchmark(const BenchmarkManifest& manifest);

std::string benchmark_to_json(const BenchmarkManifest& manifest);
BenchmarkManifest benchmark_from_json(const std::string& text);
void save_benchmark(const BenchmarkManifest& manifest, const std::filesystem::path& path);
BenchmarkManifest load_benchmark(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON serialization.
std::string benchmark_hash(const BenchmarkManifest& manifest);

/// View bundles per dataset keyed by origin id.
using BundleIndex = std::map<std::int64_t, std::shared_ptr<const ViewBundle>>;
using DatasetBundles = std::map<std::string, BundleIndex>;

/// Precomputes bundles for every graph of a dataset.
BundleIndex index_dataset(const SourceDataset& ds, const ViewConfig& views);

/// Rebuilds episode-ready tasks (pre-split support/query pools) for the
/// given task ids from raw data; memberships are bit-identical to the
/// manifest. Errc::benchmark listing missing ids when data cannot resolve.
std::vector<TaskData> tasks_from_manifest(const BenchmarkManifest& manifest,
                                          const std::vector<std::string>& task_ids,
                                          const DatasetBundles& data);

std::uint64_t fnv1a64(const std::string& text);
std::string fnv1a64_hex(const std::string& text);

} // namespace metaview

#endif // METAVIEW_BENCHBUILD_HPP_
