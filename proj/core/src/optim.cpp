#include "metaview/optim.hpp"

#include <cmath>

namespace metaview {

double cosine_lr(std::int64_t step, std::int64_t total_steps, double lr_max) {
  if (step < 0 || total_steps <= 0 || step > total_steps)
    fail(Errc::value, "cosine_lr requires 0 <= step <= total_steps");
  const double ratio = static_cast<double>(step) / static_cast<double>(total_steps);
  return lr_max * (1.0 + std::cos(3.14159265358979323846 * ratio)) / 2.0;
}

void Adam::ensure_states(const ParamStore& params) {
  if (states_.size() == params.size())
    return;
  states_.clear();
  states_.reserve(params.size());
  for (const auto& [name, t] : params.items()) {
    State s;
    s.m = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    s.v = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    states_.push_back(std::move(s));
  }
}

void Adam::reset() { states_.clear(); }

void Adam::apply(Tensor& param, const Eigen::MatrixXd& grad, State& state) {
  if (checked_numerics() && !grad.allFinite())
    fail(Errc::numeric, "non-finite gradient passed to Adam");
  state.t += 1;
  state.m = cfg_.beta1 * state.m + (1.0 - cfg_.beta1) * grad;
  state.v = cfg_.beta2 * state.v + (1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
  const double bias1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(state.t));
  const double bias2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(state.t));
  Eigen::ArrayXXd m_hat = state.m.array() / bias1;
  Eigen::ArrayXXd v_hat = state.v.array() / bias2;
  Eigen::MatrixXd updated =
      param.value().array() - cfg_.lr * m_hat / (v_hat.sqrt() + cfg_.eps);
  param.set_value(updated);
}

void Adam::step(ParamStore& params) {
  ensure_states(params);
  std::size_t i = 0;
  for (auto& [name, t] : params.items()) {
    Eigen::MatrixXd grad = t.grad().size() > 0
                               ? t.grad()
                               : Eigen::MatrixXd::Zero(t.rows(), t.cols());
    apply(t, grad, states_[i++]);
  }
}

void Adam::step(ParamStore& params, const GradTable& grads) {
  ensure_states(params);
  std::size_t i = 0;
  for (auto& [name, t] : params.items()) {
    auto found = grads.find(t.id());
    Eigen::MatrixXd grad = found != grads.end()
                               ? found->second
                               : Eigen::MatrixXd::Zero(t.rows(), t.cols());
    apply(t, grad, states_[i++]);
  }
}

} // namespace metaview
