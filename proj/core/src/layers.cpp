#include "metaview/layers.hpp"

#include <cmath>

namespace metaview {

Tensor& ParamStore::add(const std::string& name, Eigen::MatrixXd init) {
  if (find(name))
    fail(Errc::value, "duplicate parameter name: " + name);
  items_.emplace_back(name, Tensor::param(std::move(init)));
  return items_.back().second;
}

Tensor* ParamStore::find(const std::string& name) {
  for (auto& [n, t] : items_)
    if (n == name)
      return &t;
  return nullptr;
}

void ParamStore::zero_grad() {
  for (auto& [n, t] : items_)
    t.zero_grad();
}

std::size_t ParamStore::total_entries() const {
  std::size_t total = 0;
  for (const auto& [n, t] : items_)
    total += static_cast<std::size_t>(t.size());
  return total;
}

std::vector<Eigen::MatrixXd> ParamStore::snapshot() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(items_.size());
  for (const auto& [n, t] : items_)
    out.push_back(t.value());
  return out;
}

void ParamStore::restore(const std::vector<Eigen::MatrixXd>& values) {
  if (values.size() != items_.size())
    fail(Errc::value, "snapshot size does not match parameter store");
  for (std::size_t i = 0; i < values.size(); ++i)
    items_[i].second.set_value(values[i]);
}

Eigen::MatrixXd xavier_uniform(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Eigen::MatrixXd w(fan_in, fan_out);
  for (Eigen::Index r = 0; r < fan_in; ++r)
    for (Eigen::Index c = 0; c < fan_out; ++c)
      w(r, c) = rng.uniform(-limit, limit);
  return w;
}

Linear make_linear(ParamStore& store, const std::string& prefix, Eigen::Index in,
                   Eigen::Index out, Rng& rng) {
  Linear layer;
  layer.w = store.add(prefix + ".w", xavier_uniform(in, out, rng));
  layer.b = store.add(prefix + ".b", Eigen::MatrixXd::Zero(1, out));
  return layer;
}

Tensor linear_apply(const Linear& layer, const Tensor& x) {
  return add_rowvec(matmul(x, layer.w), layer.b);
}

Mlp make_mlp(ParamStore& store, const std::string& prefix, Eigen::Index in,
             Eigen::Index hidden, Eigen::Index out, int n_layers, Rng& rng) {
  if (n_layers < 1)
    fail(Errc::value, "mlp needs at least one layer");
  Mlp mlp;
  mlp.in_width = in;
  mlp.out_width = out;
  for (int l = 0; l < n_layers; ++l) {
    const Eigen::Index li = l == 0 ? in : hidden;
    const Eigen::Index lo = l == n_layers - 1 ? out : hidden;
    mlp.layers.push_back(make_linear(store, prefix + "." + std::to_string(l), li, lo, rng));
  }
  return mlp;
}

Tensor mlp_apply(const Mlp& mlp, const Tensor& x) {
  Tensor h = x;
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    h = linear_apply(mlp.layers[l], h);
    if (l + 1 < mlp.layers.size())
      h = swish(h);
  }
  return h;
}

Tensor gin_conv(const Csr& adj, const Tensor& h, const Tensor& eps, const Mlp& mlp) {
  if (h.cols() != mlp.in_width)
    fail(Errc::dimension, "gin_conv: feature width does not match the MLP input");
  Tensor combined = add(scalar_mul(add_scalar(eps, 1.0), h), neighbor_sum(adj, h));
  return mlp_apply(mlp, combined);
}

double softplus(double x) {
  // overflow-safe log(1 + e^x)
  if (x > 30.0)
    return x;
  return std::log1p(std::exp(x));
}

double inverse_softplus(double y) {
  if (y <= 0.0)
    fail(Errc::value, "inverse_softplus requires a positive argument");
  if (y > 30.0)
    return y;
  return std::log(std::expm1(y));
}

Tensor fwt(const Tensor& h, double theta_gamma, double theta_beta, Mode mode, Rng& rng) {
  if (mode == Mode::eval)
    return h;
  const double gamma = rng.normal(1.0, softplus(theta_gamma));
  const double beta = rng.normal(0.0, softplus(theta_beta));
  return affine_const(h, gamma, beta);
}

} // namespace metaview
