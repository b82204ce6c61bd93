#ifndef METAVIEW_OPTIM_HPP_
#define METAVIEW_OPTIM_HPP_

#include <cstdint>

#include "metaview/layers.hpp"

namespace metaview {

/// lr_max * (1 + cos(pi * step / total_steps)) / 2.
double cosine_lr(std::int64_t step, std::int64_t total_steps, double lr_max);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Standard Adam with bias correction. State is aligned with the parameter
/// store's insertion order; each parameter carries its own moments and step
/// count.
class Adam {
public:
  struct State {
    Eigen::MatrixXd m, v;
    std::int64_t t = 0;
  };

  explicit Adam(AdamConfig cfg = AdamConfig()) : cfg_(cfg) {}

  void set_lr(double lr) { cfg_.lr = lr; }
  double lr() const { return cfg_.lr; }
  const AdamConfig& config() const { return cfg_; }

  /// Updates every parameter from its accumulated leaf gradient.
  void step(ParamStore& params);

  /// Updates from an external gradient table; parameters without an entry
  /// are treated as having zero gradient.
  void step(ParamStore& params, const GradTable& grads);

  std::vector<State>& states() { return states_; }
  const std::vector<State>& states() const { return states_; }
  void reset();

private:
  void apply(Tensor& param, const Eigen::MatrixXd& grad, State& state);
  void ensure_states(const ParamStore& params);

  AdamConfig cfg_;
  std::vector<State> states_;
};

} // namespace metaview

#endif // METAVIEW_OPTIM_HPP_
