#ifndef METAVIEW_COMMON_HPP_
#define METAVIEW_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace metaview {

inline constexpr const char* kToolVersion = "0.1.0";

/// Coarse failure categories. The CLI maps `config` to exit code 2 and
/// everything else to exit code 1.
enum class Errc {
  config,
  ingest,
  dataset_format,
  dimension,
  value,
  numeric,
  episode,
  benchmark,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace metaview

#endif // METAVIEW_COMMON_HPP_
