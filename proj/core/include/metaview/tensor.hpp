#ifndef METAVIEW_TENSOR_HPP_
#define METAVIEW_TENSOR_HPP_

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "metaview/common.hpp"
#include "metaview/graph.hpp"
#include "metaview/rng.hpp"

namespace metaview {

enum class Mode { train, eval };

namespace detail {

struct TensorNode {
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad; // leaf accumulator, lazily sized
  bool requires_grad = false;
  bool leaf = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  // Maps the upstream gradient to one contribution per parent; entries for
  // parents that do not require gradients may be left empty.
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::MatrixXd&)> vjp;
};

} // namespace detail

/// Gradients keyed by graph node, produced by a pure backward pass. Reading
/// a table instead of mutating node state keeps concurrent backward passes
/// over a shared parameter snapshot race-free.
using GradTable = std::unordered_map<const detail::TensorNode*, Eigen::MatrixXd>;

/// Value-semantic handle to one node of a dynamically built computation
/// graph. Rank is at most 2; row vectors are 1 x d matrices and scalars are
/// 1 x 1. All arithmetic is double precision.
class Tensor {
public:
  Tensor() = default;

  static Tensor constant(Eigen::MatrixXd v);
  static Tensor param(Eigen::MatrixXd v); // leaf with gradients tracked
  static Tensor zeros(Eigen::Index rows, Eigen::Index cols);
  static Tensor scalar(double v);

  bool defined() const { return node_ != nullptr; }
  const Eigen::MatrixXd& value() const { return node_->value; }
  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  Eigen::Index size() const { return node_->value.size(); }
  double item() const;

  bool requires_grad() const { return node_ && node_->requires_grad; }
  bool is_leaf() const { return node_ && node_->leaf; }

  /// Leaf gradient accumulated by backward(); zero-sized until first use.
  const Eigen::MatrixXd& grad() const { return node_->grad; }
  void zero_grad();
  void accumulate_grad(const Eigen::MatrixXd& g);

  /// Overwrites a leaf's value in place (optimizer updates, perturbations).
  void set_value(const Eigen::MatrixXd& v);

  /// Reverse pass from a scalar; accumulates into every reachable leaf's
  /// grad buffer.
  void backward() const;

  /// Pure reverse pass; returns gradients for every reachable node that
  /// requires them without touching any shared state.
  GradTable backward_table() const;

  const detail::TensorNode* id() const { return node_.get(); }

  // op implementations need access; not part of the public surface proper
  std::shared_ptr<detail::TensorNode> node_;
};

/// When enabled (default), every operation verifies its output is finite and
/// throws Errc::numeric otherwise.
void set_checked_numerics(bool enabled);
bool checked_numerics();

// ---- elementwise / arithmetic ----
Tensor add(const Tensor& a, const Tensor& b);      // same shape
Tensor sub(const Tensor& a, const Tensor& b);      // same shape
Tensor hadamard(const Tensor& a, const Tensor& b); // same shape
Tensor scale(const Tensor& a, double c);
Tensor add_scalar(const Tensor& a, double c);
Tensor add_const(const Tensor& a, const Eigen::MatrixXd& m); // constant offset
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add_rowvec(const Tensor& a, const Tensor& row); // broadcast 1 x d over rows
Tensor scalar_mul(const Tensor& s, const Tensor& a);   // 1 x 1 times matrix

// ---- activations ----
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor swish(const Tensor& a); // x * sigmoid(x)
Tensor softmax_rows(const Tensor& a);

/// Train mode: zero each entry with probability p and scale survivors by
/// 1/(1-p). Eval mode or p == 0: identity.
Tensor dropout(const Tensor& a, double p, Mode mode, Rng& rng);

/// y = gamma * x + beta with constant gamma/beta; gradient flows through x
/// with factor gamma.
Tensor affine_const(const Tensor& a, double gamma, double beta);

// ---- structure ----
Tensor neighbor_sum(const Csr& adj, const Tensor& h); // out[v] = sum_{u in N(v)} h[u]
Tensor mean_pool_rows(const Tensor& h);               // n x d -> 1 x d
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor reshape(const Tensor& a, Eigen::Index rows, Eigen::Index cols); // row-major

/// out[j] = mean of rows of h whose label is j, j in [0, k).
Tensor group_mean_rows(const Tensor& h, const std::vector<int>& labels, int k);

/// out[i, j] = squared Euclidean distance between q_i and c_j.
Tensor pairwise_sqdist(const Tensor& q, const Tensor& c);

/// out[i, j] = cosine similarity of q_i and c_j; zero-norm rows give 0.
Tensor cosine_matrix(const Tensor& q, const Tensor& c);

/// Row (i * c.rows() + j) of the output is [q_i | c_j].
Tensor pair_concat(const Tensor& q, const Tensor& c);

// ---- reductions / losses ----
Tensor sum_all(const Tensor& a); // 1 x 1
Tensor mean_all(const Tensor& a);

/// Sum over rows of (logsumexp(row) - row[label]); softmax cross-entropy.
Tensor cross_entropy_sum(const Tensor& logits, const std::vector<int>& labels);

/// Sum over rows of -log(probs[row, label]); rows must be distributions.
Tensor nll_probs_sum(const Tensor& probs, const std::vector<int>& labels);

// ---- non-differentiable helpers ----
std::vector<int> argmax_rows(const Eigen::MatrixXd& m);

} // namespace metaview

#endif // METAVIEW_TENSOR_HPP_
