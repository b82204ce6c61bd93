#ifndef METAVIEW_ENCODER_HPP_
#define METAVIEW_ENCODER_HPP_

#include "metaview/layers.hpp"
#include "metaview/views.hpp"

namespace metaview {

struct EncoderConfig {
  Eigen::Index d_h = 256; // hidden width
  int gnn_layers = 2;     // per stack, 1..3
  int mlp_layers = 2;     // per GIN convolution and projection head, 1..3
  double dropout_p = 0.6;
  FwtConfig fwt;
  // view toggles for the ablation rows: contextual X, degree encodings U,
  // diffusion spectrum Z
  bool use_x = true;
  bool use_u = true;
  bool use_z = true;

  void validate() const;
  int enabled_views() const { return int(use_x) + int(use_u) + int(use_z); }
};

/// One encoder layer: GIN convolution followed by dropout, feature-wise
/// transform, and swish.
struct GinLayer {
  Mlp mlp;
  Tensor eps; // learnable, initialized to 0
};

struct GinStack {
  std::vector<GinLayer> layers;
};

/// All encoder parameters. theta/phi are the dedicated contextual and
/// topological GIN stacks (same architecture, never shared), psi projects
/// the spectrum, and w1/w2 are the attention weights
/// (w1: 3*d_h x d_h, w2: d_h x 3, no biases).
struct EncoderParams {
  GinStack theta;
  GinStack phi;
  Mlp psi;
  Tensor w1;
  Tensor w2;
};

/// Registers all encoder parameters into `store` and Xavier-initializes
/// them from `rng`.
EncoderParams init_encoder_params(ParamStore& store, const EncoderConfig& cfg,
                                  const ViewConfig& views, Rng& rng);

struct EncodeResult {
  Tensor h;     // 1 x d_h aggregated representation
  Tensor alpha; // 1 x 3 attention weights over (x, u, z)
};

/// alpha = Softmax(ReLU([h_x | h_u | h_z] W1) W2 + mask);
/// h = alpha_0 h_x + alpha_1 h_u + alpha_2 h_z.
/// mask entries for disabled views are driven to -1e30 so their weights
/// underflow to exactly zero.
EncodeResult attention_aggregate(const Tensor& h_x, const Tensor& h_u, const Tensor& h_z,
                                 const Tensor& w1, const Tensor& w2,
                                 const Eigen::RowVector3d& mask, double dropout_p, Mode mode,
                                 Rng& rng);

/// Full encoder: h_x = mean-pool of the contextual GIN stack, h_u = mean-pool
/// of the topological GIN stack, h_z = projection of the spectrum, attention
/// aggregation over the enabled views. Disabled views contribute zero vectors
/// and masked attention logits.
EncodeResult encode_graph(const ViewBundle& bundle, const EncoderParams& params,
                          const EncoderConfig& cfg, Mode mode, Rng& rng);

} // namespace metaview

#endif // METAVIEW_ENCODER_HPP_
