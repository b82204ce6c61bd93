#include "metaview/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "metaview/rng.hpp"

namespace metaview {

GradCheckReport finite_diff_check(ParamStore& params, const std::function<Tensor()>& loss_fn,
                                  const GradCheckOptions& options) {
  Tensor loss = loss_fn();
  if (loss.size() != 1)
    fail(Errc::dimension, "finite_diff_check requires a scalar loss");
  {
    Tensor again = loss_fn();
    if (loss.item() != again.item())
      fail(Errc::value, "finite_diff_check: loss function is not deterministic "
                        "(two forward passes disagree)");
  }
  GradTable table = loss.backward_table();

  GradCheckReport report;
  Rng rng(options.seed);
  for (auto& [name, param] : params.items()) {
    auto found = table.find(param.id());
    Eigen::MatrixXd analytic = found != table.end()
                                   ? found->second
                                   : Eigen::MatrixXd::Zero(param.rows(), param.cols());

    std::vector<std::size_t> entries;
    const std::size_t total = static_cast<std::size_t>(param.size());
    if (options.max_entries_per_param == 0 || total <= options.max_entries_per_param) {
      entries.resize(total);
      for (std::size_t i = 0; i < total; ++i)
        entries[i] = i;
    } else {
      entries = rng.sample_indices(total, options.max_entries_per_param);
    }

    Eigen::MatrixXd original = param.value();
    for (std::size_t flat : entries) {
      const Eigen::Index r = static_cast<Eigen::Index>(flat) / param.cols();
      const Eigen::Index c = static_cast<Eigen::Index>(flat) % param.cols();

      Eigen::MatrixXd bumped = original;
      bumped(r, c) = original(r, c) + options.h;
      param.set_value(bumped);
      const double f_plus = loss_fn().item();
      bumped(r, c) = original(r, c) - options.h;
      param.set_value(bumped);
      const double f_minus = loss_fn().item();
      param.set_value(original);

      const double g_fd = (f_plus - f_minus) / (2.0 * options.h);
      const double g_ad = analytic(r, c);
      const double rel =
          std::abs(g_ad - g_fd) / std::max({1.0, std::abs(g_ad), std::abs(g_fd)});
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = name + "[" + std::to_string(r) + "," + std::to_string(c) + "]";
      }
    }
  }
  return report;
}

} // namespace metaview
