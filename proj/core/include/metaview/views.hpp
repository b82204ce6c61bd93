#ifndef METAVIEW_VIEWS_HPP_
#define METAVIEW_VIEWS_HPP_

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "metaview/graph.hpp"

namespace metaview {

enum class ContextualMode { pad, deepset, hetero_concat };
enum class DiffusionKind { ppr, heat };

ContextualMode contextual_mode_from_string(const std::string& s);
DiffusionKind diffusion_kind_from_string(const std::string& s);
const char* to_string(ContextualMode m);
const char* to_string(DiffusionKind k);

struct ViewConfig {
  ContextualMode contextual_mode = ContextualMode::pad;
  Eigen::Index d_pad = 100; // contextual feature width after augmentation
  Eigen::Index d_u = 32;    // sinusoidal degree encoding width, even
  Eigen::Index d_z = 128;   // spectrum length
  DiffusionKind diffusion_kind = DiffusionKind::ppr;
  double alpha = 0.2;  // PPR teleport probability
  double heat_t = 5.0; // heat kernel diffusion time
  int series_truncation = 64;
  std::uint64_t augment_seed = 0; // seeds the fixed deepset/hetero projections

  void validate() const;
};

/// The three congruent views of one graph. All views share the adjacency.
struct ViewBundle {
  std::shared_ptr<const Csr> adj;
  Eigen::MatrixXd contextual;  // n x d_pad
  Eigen::MatrixXd topological; // n x d_u
  Eigen::VectorXd spectrum;    // d_z, sorted non-increasing, zero-padded
};

/// First d_x columns equal X, the rest are zero.
Eigen::MatrixXd pad_features(const Eigen::MatrixXd& X, Eigen::Index d_pad);

/// Shared scalar-to-vector map applied to every feature entry, summed over
/// feature dimensions: out[v] = w * sum_i X[v,i] + d_x * b.
struct DeepsetMap {
  Eigen::VectorXd w; // d_pad
  Eigen::VectorXd b; // d_pad
};
Eigen::MatrixXd deepset_features(const Eigen::MatrixXd& X, const DeepsetMap& map,
                                 Eigen::Index d_pad);

/// out = [X | X*W + b | zeros] per row.
struct LinearMap {
  Eigen::MatrixXd W;    // d_x x d_p
  Eigen::RowVectorXd b; // d_p
};
Eigen::MatrixXd hetero_concat_features(const Eigen::MatrixXd& X, const LinearMap& map,
                                       Eigen::Index d_pad);

/// Transformer-style sinusoids with position := node degree, base 10000:
/// U[v, 2i] = sin(deg(v) / 10000^(2i/d_u)), U[v, 2i+1] = cos(same).
Eigen::MatrixXd degree_encoding(const Graph& g, Eigen::Index d_u);

/// Sorted eigenvalue spectrum of the diffusion matrix, computed in closed
/// form from the eigenvalues lambda of the degree-normalized adjacency
/// (symmetric similar to the transition matrix A D^-1):
/// PPR  mu = alpha / (1 - (1-alpha) lambda), heat mu = exp(t (lambda - 1)).
/// Truncated to d_z, zero-padded on the right when n < d_z.
Eigen::VectorXd diffusion_spectrum(const Graph& g, const ViewConfig& cfg);

/// Independent verification path: materializes S = sum_k theta_k T^k with
/// T = A D^-1 truncated at cfg.series_truncation and runs a general dense
/// eigensolver on it. Slower; used by the property suites.
Eigen::VectorXd diffusion_spectrum_series_reference(const Graph& g, const ViewConfig& cfg);

ViewBundle build_views(const Graph& g, const ViewConfig& cfg);

} // namespace metaview

#endif // METAVIEW_VIEWS_HPP_
