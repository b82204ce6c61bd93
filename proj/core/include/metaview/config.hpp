#ifndef METAVIEW_CONFIG_HPP_
#define METAVIEW_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "metaview/encoder.hpp"
#include "metaview/evaluate.hpp"
#include "metaview/synthbench.hpp"
#include "metaview/train.hpp"

namespace metaview {

/// Full run configuration assembled from a plain-text key-value file
/// ("key = value" lines, '#' comments). Every key has a default; unknown
/// keys are rejected with Errc::config. See RunConfig::schema() for the
/// documented key list.
struct RunConfig {
  ViewConfig views;
  EncoderConfig encoder;
  TrainConfig train;
  EvalConfig eval;
  SynthSuiteConfig synth;
  std::string data_dir; // defaults to $METAVIEW_DATA_DIR or "."
  std::uint64_t seed = 0;
  int jobs = 1;

  /// Canonical serialization: every key in schema order, one per line.
  std::string canonical() const;
  /// FNV-1a hex over canonical().
  std::string hash() const;

  /// Documented key -> default/description table, one "key  default
  /// description" line per setting.
  static std::string schema();

  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Re-applies CLI-level overrides and re-syncs the derived per-section
/// seeds/jobs fields.
void apply_overrides(RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<int>& jobs, const std::optional<std::string>& data_dir);

} // namespace metaview

#endif // METAVIEW_CONFIG_HPP_
