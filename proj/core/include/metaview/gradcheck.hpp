#ifndef METAVIEW_GRADCHECK_HPP_
#define METAVIEW_GRADCHECK_HPP_

#include <functional>
#include <string>

#include "metaview/layers.hpp"

namespace metaview {

struct GradCheckOptions {
  double h = 1e-5;
  std::size_t max_entries_per_param = 0; // 0 checks every entry
  std::uint64_t seed = 0;                // entry subsampling when capped
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
};

/// Central finite differences against the reverse-mode gradient.
/// loss_fn must rebuild a scalar loss from the current parameter values and
/// be deterministic (freeze any rng it uses); the checker re-evaluates it
/// and throws Errc::value if two forward passes disagree bit-for-bit.
/// Relative error per entry: |g_ad - g_fd| / max(1, |g_ad|, |g_fd|).
GradCheckReport finite_diff_check(ParamStore& params, const std::function<Tensor()>& loss_fn,
                                  const GradCheckOptions& options = {});

} // namespace metaview

#endif // METAVIEW_GRADCHECK_HPP_
