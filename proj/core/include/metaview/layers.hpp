#ifndef METAVIEW_LAYERS_HPP_
#define METAVIEW_LAYERS_HPP_

#include <string>
#include <vector>

#include "metaview/tensor.hpp"

namespace metaview {

/// Ordered, named parameter collection. Insertion order is the canonical
/// order for optimizer state and checkpoints.
class ParamStore {
public:
  Tensor& add(const std::string& name, Eigen::MatrixXd init);
  Tensor* find(const std::string& name);
  const std::vector<std::pair<std::string, Tensor>>& items() const { return items_; }
  std::vector<std::pair<std::string, Tensor>>& items() { return items_; }
  std::size_t size() const { return items_.size(); }

  void zero_grad();
  std::size_t total_entries() const;

  /// Deep copy of all parameter values, aligned with items().
  std::vector<Eigen::MatrixXd> snapshot() const;
  void restore(const std::vector<Eigen::MatrixXd>& values);

private:
  std::vector<std::pair<std::string, Tensor>> items_;
};

/// Glorot-uniform draw; variance 2 / (fan_in + fan_out).
Eigen::MatrixXd xavier_uniform(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng);

struct Linear {
  Tensor w; // in x out
  Tensor b; // 1 x out
};
Linear make_linear(ParamStore& store, const std::string& prefix, Eigen::Index in,
                   Eigen::Index out, Rng& rng);
Tensor linear_apply(const Linear& layer, const Tensor& x);

/// Plain MLP; swish between layers, last layer linear.
struct Mlp {
  std::vector<Linear> layers;
  Eigen::Index in_width = 0;
  Eigen::Index out_width = 0;
};
Mlp make_mlp(ParamStore& store, const std::string& prefix, Eigen::Index in,
             Eigen::Index hidden, Eigen::Index out, int n_layers, Rng& rng);
Tensor mlp_apply(const Mlp& mlp, const Tensor& x);

/// GIN convolution: out[v] = MLP((1 + eps) h[v] + sum_{u in N(v)} h[u]).
Tensor gin_conv(const Csr& adj, const Tensor& h, const Tensor& eps, const Mlp& mlp);

double softplus(double x);
double inverse_softplus(double y); // softplus(inverse_softplus(y)) == y, y > 0

/// Feature-wise transform. Train mode samples gamma ~ N(1, softplus(theta_gamma))
/// and beta ~ N(0, softplus(theta_beta)) once per call and returns
/// gamma * h + beta; eval mode is the identity. theta values are fixed
/// constants, not learned, so gradients flow through h with factor gamma.
Tensor fwt(const Tensor& h, double theta_gamma, double theta_beta, Mode mode, Rng& rng);

struct FwtConfig {
  bool enabled = true;
  double sigma_gamma = 0.3; // softplus(theta_gamma)
  double sigma_beta = 0.5;  // softplus(theta_beta)

  double theta_gamma() const { return inverse_softplus(sigma_gamma); }
  double theta_beta() const { return inverse_softplus(sigma_beta); }
};

} // namespace metaview

#endif // METAVIEW_LAYERS_HPP_
