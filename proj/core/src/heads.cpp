#include "metaview/heads.hpp"

#include "metaview/optim.hpp"

namespace metaview {

HeadKind head_kind_from_string(const std::string& s) {
  if (s == "proto") return HeadKind::proto;
  if (s == "match") return HeadKind::match;
  if (s == "relation") return HeadKind::relation;
  fail(Errc::config, "unknown head: " + s);
}

const char* to_string(HeadKind h) {
  switch (h) {
  case HeadKind::proto: return "proto";
  case HeadKind::match: return "match";
  case HeadKind::relation: return "relation";
  }
  return "?";
}

Tensor proto_logits(const Tensor& h_support, const std::vector<int>& y_support,
                    const Tensor& h_query, int k) {
  Tensor prototypes = group_mean_rows(h_support, y_support, k);
  return scale(pairwise_sqdist(h_query, prototypes), -1.0);
}

Tensor match_probs(const Tensor& h_support, const std::vector<int>& y_support,
                   const Tensor& h_query, int k) {
  if (static_cast<Eigen::Index>(y_support.size()) != h_support.rows())
    fail(Errc::dimension, "match_probs: support label count mismatch");
  Tensor attention = softmax_rows(cosine_matrix(h_query, h_support));
  // one-hot support labels fold the attention into class probabilities
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(h_support.rows(), k);
  for (Eigen::Index i = 0; i < h_support.rows(); ++i) {
    const int y = y_support[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k)
      fail(Errc::value, "match_probs: label out of range");
    onehot(i, y) = 1.0;
  }
  return matmul(attention, Tensor::constant(onehot));
}

Tensor relation_scores(const Tensor& h_support, const std::vector<int>& y_support,
                       const Tensor& h_query, int k, const Mlp& relation_mlp) {
  if (relation_mlp.in_width != 2 * h_query.cols())
    fail(Errc::dimension, "relation_scores: MLP input width must be 2*d_h");
  Tensor class_means = group_mean_rows(h_support, y_support, k);
  Tensor pairs = pair_concat(h_query, class_means); // (m*k) x 2d_h
  Tensor raw = mlp_apply(relation_mlp, pairs);      // (m*k) x 1
  return sigmoid(reshape(raw, h_query.rows(), k));
}

Mlp make_relation_mlp(ParamStore& store, Eigen::Index d_h, Rng& rng) {
  return make_mlp(store, "relation", 2 * d_h, d_h, 1, 2, rng);
}

Tensor head_loss_sum(HeadKind head, const Tensor& head_output,
                     const std::vector<int>& y_query) {
  switch (head) {
  case HeadKind::proto:
    return cross_entropy_sum(head_output, y_query);
  case HeadKind::match:
    return nll_probs_sum(head_output, y_query);
  case HeadKind::relation: {
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(head_output.rows(), head_output.cols());
    for (Eigen::Index r = 0; r < head_output.rows(); ++r)
      target(r, y_query[static_cast<std::size_t>(r)]) = 1.0;
    Tensor diff = sub(head_output, Tensor::constant(target));
    return sum_all(hadamard(diff, diff));
  }
  }
  fail(Errc::value, "unreachable head kind");
}

std::vector<int> head_predictions(const Eigen::MatrixXd& head_output) {
  return argmax_rows(head_output);
}

CosineClassifier cosine_adapt(const Eigen::MatrixXd& h_support,
                              const std::vector<int>& y_support, int k, int steps, double lr,
                              double tau) {
  if (steps < 0)
    fail(Errc::value, "cosine_adapt: steps must be non-negative");
  // prototype initialization
  Tensor frozen = Tensor::constant(h_support);
  Eigen::MatrixXd init = group_mean_rows(frozen, y_support, k).value();

  ParamStore store;
  Tensor w = store.add("cosine.w", init);
  Adam adam({lr});
  for (int s = 0; s < steps; ++s) {
    store.zero_grad();
    Tensor logits = scale(cosine_matrix(frozen, w), tau); // support x k
    Tensor loss = cross_entropy_sum(logits, y_support);
    loss.backward();
    adam.step(store);
  }
  CosineClassifier clf;
  clf.w = w.value();
  clf.tau = tau;
  return clf;
}

Eigen::MatrixXd cosine_logits(const CosineClassifier& clf, const Eigen::MatrixXd& h) {
  Tensor logits = scale(cosine_matrix(Tensor::constant(h), Tensor::constant(clf.w)), clf.tau);
  return logits.value();
}

} // namespace metaview
