#include "metaview/rng.hpp"

namespace metaview {

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
  // Partial Fisher-Yates over an index vector; O(n) setup, fine at our scale.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = i;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k && i < n; ++i) {
    std::size_t j = i + uniform_index(n - i);
    std::swap(idx[i], idx[j]);
    out.push_back(idx[i]);
  }
  return out;
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace metaview
