#ifndef METAVIEW_HEADS_HPP_
#define METAVIEW_HEADS_HPP_

#include <string>
#include <vector>

#include "metaview/layers.hpp"

namespace metaview {

enum class HeadKind { proto, match, relation };

HeadKind head_kind_from_string(const std::string& s);
const char* to_string(HeadKind h);

/// Prototypical logits: prototype c_j is the mean of class-j support rows,
/// logit(q, j) = -||h_q - c_j||^2. Trained with softmax cross-entropy.
Tensor proto_logits(const Tensor& h_support, const std::vector<int>& y_support,
                    const Tensor& h_query, int k);

/// Matching distributions: attention a(q, i) = softmax over support of
/// cosine(h_q, h_i); P(y|q) = sum_i a(q, i) [y_i = y]. Rows sum to one.
Tensor match_probs(const Tensor& h_support, const std::vector<int>& y_support,
                   const Tensor& h_query, int k);

/// Relation scores in (0, 1): sigmoid(MLP([h_q | c_j])) against the mean
/// class representation c_j; trained with squared error to one-hot targets.
/// relation_mlp maps 2*d_h -> 1.
Tensor relation_scores(const Tensor& h_support, const std::vector<int>& y_support,
                       const Tensor& h_query, int k, const Mlp& relation_mlp);

/// Builds a fresh relation MLP (2*d_h -> d_h -> 1) in `store`.
Mlp make_relation_mlp(ParamStore& store, Eigen::Index d_h, Rng& rng);

/// Query-loss sum for one episode, matching the head's training recipe:
/// proto -> softmax cross-entropy over logits; match -> negative log
/// likelihood over distributions; relation -> squared error to one-hot.
Tensor head_loss_sum(HeadKind head, const Tensor& head_output, const std::vector<int>& y_query);

/// Argmax predictions from head output values.
std::vector<int> head_predictions(const Eigen::MatrixXd& head_output);

// ---- cosine-classifier adaptation (meta-test) ----

struct CosineClassifier {
  Eigen::MatrixXd w; // k x d_h class weight vectors
  double tau = 10.0; // fixed logit scale
};

/// Fits per-class weight vectors on frozen support embeddings: logits are
/// tau * cosine(h, w_j), cross-entropy on the support set, `steps` Adam
/// updates at `lr`. Weights are initialized at the class prototypes.
CosineClassifier cosine_adapt(const Eigen::MatrixXd& h_support,
                              const std::vector<int>& y_support, int k, int steps, double lr,
                              double tau = 10.0);

Eigen::MatrixXd cosine_logits(const CosineClassifier& clf, const Eigen::MatrixXd& h);

} // namespace metaview

#endif // METAVIEW_HEADS_HPP_
