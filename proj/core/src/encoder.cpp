#include "metaview/encoder.hpp"

namespace metaview {

void EncoderConfig::validate() const {
  if (d_h < 1)
    fail(Errc::config, "hidden width must be positive");
  if (gnn_layers < 1 || gnn_layers > 3 || mlp_layers < 1 || mlp_layers > 3)
    fail(Errc::config, "gnn_layers and mlp_layers must lie in {1, 2, 3}");
  if (dropout_p < 0.0 || dropout_p >= 1.0)
    fail(Errc::config, "dropout probability must lie in [0, 1)");
  if (enabled_views() == 0)
    fail(Errc::config, "at least one view must be enabled");
}

namespace {

GinStack make_gin_stack(ParamStore& store, const std::string& prefix, Eigen::Index d_in,
                        const EncoderConfig& cfg, Rng& rng) {
  GinStack stack;
  for (int l = 0; l < cfg.gnn_layers; ++l) {
    GinLayer layer;
    const Eigen::Index in = l == 0 ? d_in : cfg.d_h;
    const std::string name = prefix + "." + std::to_string(l);
    layer.mlp = make_mlp(store, name + ".mlp", in, cfg.d_h, cfg.d_h, cfg.mlp_layers, rng);
    layer.eps = store.add(name + ".eps", Eigen::MatrixXd::Zero(1, 1));
    stack.layers.push_back(std::move(layer));
  }
  return stack;
}

Tensor stack_forward(const GinStack& stack, const Csr& adj, const Eigen::MatrixXd& input,
                     const EncoderConfig& cfg, Mode mode, Rng& rng) {
  Tensor h = Tensor::constant(input);
  for (const auto& layer : stack.layers) {
    h = gin_conv(adj, h, layer.eps, layer.mlp);
    h = dropout(h, cfg.dropout_p, mode, rng);
    if (cfg.fwt.enabled)
      h = fwt(h, cfg.fwt.theta_gamma(), cfg.fwt.theta_beta(), mode, rng);
    h = swish(h);
  }
  return h;
}

Tensor projection_forward(const Mlp& psi, const Eigen::VectorXd& spectrum,
                          const EncoderConfig& cfg, Mode mode, Rng& rng) {
  Tensor h = Tensor::constant(spectrum.transpose()); // 1 x d_z
  for (std::size_t l = 0; l < psi.layers.size(); ++l) {
    h = linear_apply(psi.layers[l], h);
    h = dropout(h, cfg.dropout_p, mode, rng);
    if (cfg.fwt.enabled)
      h = fwt(h, cfg.fwt.theta_gamma(), cfg.fwt.theta_beta(), mode, rng);
    h = swish(h);
  }
  return h;
}

} // namespace

EncoderParams init_encoder_params(ParamStore& store, const EncoderConfig& cfg,
                                  const ViewConfig& views, Rng& rng) {
  cfg.validate();
  views.validate();
  EncoderParams params;
  params.theta = make_gin_stack(store, "theta", views.d_pad, cfg, rng);
  params.phi = make_gin_stack(store, "phi", views.d_u, cfg, rng);
  params.psi = make_mlp(store, "psi", views.d_z, cfg.d_h, cfg.d_h, cfg.mlp_layers, rng);
  params.w1 = store.add("omega.w1", xavier_uniform(3 * cfg.d_h, cfg.d_h, rng));
  params.w2 = store.add("omega.w2", xavier_uniform(cfg.d_h, 3, rng));
  return params;
}

EncodeResult attention_aggregate(const Tensor& h_x, const Tensor& h_u, const Tensor& h_z,
                                 const Tensor& w1, const Tensor& w2,
                                 const Eigen::RowVector3d& mask, double dropout_p, Mode mode,
                                 Rng& rng) {
  if (h_x.rows() != 1 || h_u.rows() != 1 || h_z.rows() != 1 ||
      h_x.cols() != h_u.cols() || h_x.cols() != h_z.cols())
    fail(Errc::dimension, "attention_aggregate expects three 1 x d_h views");
  Tensor joint = concat_cols({h_x, h_u, h_z});
  Tensor hidden = relu(matmul(joint, w1));
  hidden = dropout(hidden, dropout_p, mode, rng);
  Tensor logits = add_const(matmul(hidden, w2), mask);
  Tensor alpha = softmax_rows(logits);
  Tensor stacked = concat_rows({h_x, h_u, h_z}); // 3 x d_h
  EncodeResult out;
  out.alpha = alpha;
  out.h = matmul(alpha, stacked);
  return out;
}

EncodeResult encode_graph(const ViewBundle& bundle, const EncoderParams& params,
                          const EncoderConfig& cfg, Mode mode, Rng& rng) {
  cfg.validate();
  const Csr& adj = *bundle.adj;

  Tensor h_x = cfg.use_x ? mean_pool_rows(stack_forward(params.theta, adj, bundle.contextual,
                                                        cfg, mode, rng))
                         : Tensor::zeros(1, cfg.d_h);
  Tensor h_u = cfg.use_u ? mean_pool_rows(stack_forward(params.phi, adj, bundle.topological,
                                                        cfg, mode, rng))
                         : Tensor::zeros(1, cfg.d_h);
  Tensor h_z = cfg.use_z ? projection_forward(params.psi, bundle.spectrum, cfg, mode, rng)
                         : Tensor::zeros(1, cfg.d_h);

  // -1e30 logits underflow to an exactly-zero attention weight
  Eigen::RowVector3d mask;
  mask << (cfg.use_x ? 0.0 : -1e30), (cfg.use_u ? 0.0 : -1e30), (cfg.use_z ? 0.0 : -1e30);
  return attention_aggregate(h_x, h_u, h_z, params.w1, params.w2, mask, cfg.dropout_p, mode,
                             rng);
}

} // namespace metaview
