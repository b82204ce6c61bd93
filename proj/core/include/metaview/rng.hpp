#ifndef METAVIEW_RNG_HPP_
#define METAVIEW_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace metaview {

/// Deterministic random source. All sampling primitives are implemented on
/// top of the standardized mt19937_64 output stream, so sequences are
/// reproducible across platforms and standard-library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  /// Inclusive integer range.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_index(static_cast<std::size_t>(hi - lo + 1)));
  }

  /// Box-Muller; one draw consumes two uniforms.
  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Fisher-Yates.
  template <typename T> void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices drawn uniformly without replacement from [0, n).
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  /// Mixes a tag into a seed through splitmix64; used to derive independent
  /// substreams (per epoch, per task, per run) from one master seed.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

  /// Independent stream keyed by (this stream's seed, tag). Does not consume
  /// state from this stream.
  Rng fork(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

} // namespace metaview

#endif // METAVIEW_RNG_HPP_
