#include "metaview/tensor.hpp"

#include <atomic>
#include <cmath>
#include <unordered_set>

namespace metaview {

using detail::TensorNode;

namespace {

std::atomic<bool> g_checked{true};

void check_output(const Eigen::MatrixXd& m, const char* op) {
  if (g_checked.load(std::memory_order_relaxed) && !m.allFinite())
    fail(Errc::numeric, std::string("non-finite value produced by ") + op);
}

using Parents = std::vector<std::shared_ptr<TensorNode>>;
using Vjp = std::function<std::vector<Eigen::MatrixXd>(const Eigen::MatrixXd&)>;

Tensor make_op(Eigen::MatrixXd value, Parents parents, Vjp vjp, const char* op) {
  check_output(value, op);
  auto node = std::make_shared<TensorNode>();
  node->value = std::move(value);
  for (const auto& p : parents)
    node->requires_grad = node->requires_grad || p->requires_grad;
  node->parents = std::move(parents);
  if (node->requires_grad)
    node->vjp = std::move(vjp);
  Tensor t;
  t.node_ = std::move(node);
  return t;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(Errc::dimension, std::string(op) + ": shape mismatch");
}

void require_labels(const std::vector<int>& labels, Eigen::Index rows, Eigen::Index classes,
                    const char* op) {
  if (static_cast<Eigen::Index>(labels.size()) != rows)
    fail(Errc::dimension, std::string(op) + ": label count does not match rows");
  for (int y : labels)
    if (y < 0 || y >= classes)
      fail(Errc::value, std::string(op) + ": label out of range");
}

} // namespace

void set_checked_numerics(bool enabled) { g_checked.store(enabled); }
bool checked_numerics() { return g_checked.load(); }

Tensor Tensor::constant(Eigen::MatrixXd v) {
  auto node = std::make_shared<TensorNode>();
  node->value = std::move(v);
  node->leaf = true;
  Tensor t;
  t.node_ = std::move(node);
  return t;
}

Tensor Tensor::param(Eigen::MatrixXd v) {
  Tensor t = constant(std::move(v));
  t.node_->requires_grad = true;
  return t;
}

Tensor Tensor::zeros(Eigen::Index rows, Eigen::Index cols) {
  return constant(Eigen::MatrixXd::Zero(rows, cols));
}

Tensor Tensor::scalar(double v) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = v;
  return constant(std::move(m));
}

double Tensor::item() const {
  if (size() != 1)
    fail(Errc::dimension, "item() requires a 1x1 tensor");
  return node_->value(0, 0);
}

void Tensor::zero_grad() {
  if (node_)
    node_->grad = Eigen::MatrixXd::Zero(node_->value.rows(), node_->value.cols());
}

void Tensor::accumulate_grad(const Eigen::MatrixXd& g) {
  if (node_->grad.size() == 0)
    node_->grad = Eigen::MatrixXd::Zero(node_->value.rows(), node_->value.cols());
  node_->grad += g;
}

void Tensor::set_value(const Eigen::MatrixXd& v) {
  if (!node_ || !node_->leaf)
    fail(Errc::value, "set_value is only valid on leaf tensors");
  node_->value = v;
}

namespace {

std::vector<TensorNode*> topo_order(TensorNode* root) {
  // iterative post-order DFS over grad-requiring nodes; parents first
  std::vector<TensorNode*> order;
  std::unordered_set<TensorNode*> visited{root};
  struct Frame {
    TensorNode* node;
    std::size_t next;
  };
  std::vector<Frame> stack{{root, 0}};
  while (!stack.empty()) {
    Frame frame = stack.back();
    if (frame.next < frame.node->parents.size()) {
      ++stack.back().next;
      TensorNode* p = frame.node->parents[frame.next].get();
      if (p->requires_grad && visited.insert(p).second)
        stack.push_back({p, 0});
    } else {
      order.push_back(frame.node);
      stack.pop_back();
    }
  }
  return order;
}

GradTable run_backward(TensorNode* root) {
  if (root->value.size() != 1)
    fail(Errc::dimension, "backward requires a scalar root");
  if (!root->requires_grad)
    return {};
  auto order = topo_order(root);
  GradTable table;
  table[root] = Eigen::MatrixXd::Ones(1, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorNode* node = *it;
    auto found = table.find(node);
    if (found == table.end() || !node->vjp)
      continue;
    auto contribs = node->vjp(found->second);
    for (std::size_t i = 0; i < node->parents.size(); ++i) {
      TensorNode* parent = node->parents[i].get();
      if (!parent->requires_grad || contribs[i].size() == 0)
        continue;
      auto [slot, inserted] = table.try_emplace(parent, contribs[i]);
      if (!inserted)
        slot->second += contribs[i];
    }
  }
  return table;
}

void collect_leaves(TensorNode* root, std::vector<TensorNode*>& leaves) {
  std::unordered_set<TensorNode*> visited{root};
  std::vector<TensorNode*> stack{root};
  while (!stack.empty()) {
    TensorNode* node = stack.back();
    stack.pop_back();
    if (node->leaf && node->requires_grad)
      leaves.push_back(node);
    for (const auto& p : node->parents)
      if (p->requires_grad && visited.insert(p.get()).second)
        stack.push_back(p.get());
  }
}

} // namespace

GradTable Tensor::backward_table() const { return run_backward(node_.get()); }

void Tensor::backward() const {
  GradTable table = run_backward(node_.get());
  std::vector<TensorNode*> leaves;
  collect_leaves(node_.get(), leaves);
  for (TensorNode* leaf : leaves) {
    auto found = table.find(leaf);
    if (found == table.end())
      continue;
    if (leaf->grad.size() == 0)
      leaf->grad = Eigen::MatrixXd::Zero(leaf->value.rows(), leaf->value.cols());
    leaf->grad += found->second;
  }
}

// ---- elementwise / arithmetic ----

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  return make_op(a.value() + b.value(), {a.node_, b.node_},
                 [](const Eigen::MatrixXd& up) { return std::vector<Eigen::MatrixXd>{up, up}; },
                 "add");
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  return make_op(a.value() - b.value(), {a.node_, b.node_},
                 [](const Eigen::MatrixXd& up) { return std::vector<Eigen::MatrixXd>{up, -up}; },
                 "sub");
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "hadamard");
  Eigen::MatrixXd av = a.value(), bv = b.value();
  return make_op(av.cwiseProduct(bv), {a.node_, b.node_},
                 [av, bv](const Eigen::MatrixXd& up) {
                   return std::vector<Eigen::MatrixXd>{up.cwiseProduct(bv), up.cwiseProduct(av)};
                 },
                 "hadamard");
}

Tensor scale(const Tensor& a, double c) {
  return make_op(a.value() * c, {a.node_},
                 [c](const Eigen::MatrixXd& up) { return std::vector<Eigen::MatrixXd>{up * c}; },
                 "scale");
}

Tensor add_scalar(const Tensor& a, double c) {
  return make_op(a.value().array() + c, {a.node_},
                 [](const Eigen::MatrixXd& up) { return std::vector<Eigen::MatrixXd>{up}; },
                 "add_scalar");
}

Tensor add_const(const Tensor& a, const Eigen::MatrixXd& m) {
  if (a.rows() != m.rows() || a.cols() != m.cols())
    fail(Errc::dimension, "add_const: shape mismatch");
  return make_op(a.value() + m, {a.node_},
                 [](const Eigen::MatrixXd& up) { return std::vector<Eigen::MatrixXd>{up}; },
                 "add_const");
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows())
    fail(Errc::dimension, "matmul: inner dimensions disagree");
  Eigen::MatrixXd av = a.value(), bv = b.value();
  return make_op(av * bv, {a.node_, b.node_},
                 [av, bv](const Eigen::MatrixXd& up) {
                   return std::vector<Eigen::MatrixXd>{up * bv.transpose(), av.transpose() * up};
                 },
                 "matmul");
}

Tensor add_rowvec(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols())
    fail(Errc::dimension, "add_rowvec: expected a 1 x cols row vector");
  Eigen::RowVectorXd rv = row.value().row(0);
  Eigen::MatrixXd out = a.value().rowwise() + rv;
  return make_op(std::move(out), {a.node_, row.node_},
                 [](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd drow = up.colwise().sum();
                   return std::vector<Eigen::MatrixXd>{up, std::move(drow)};
                 },
                 "add_rowvec");
}

Tensor scalar_mul(const Tensor& s, const Tensor& a) {
  if (s.size() != 1)
    fail(Errc::dimension, "scalar_mul: multiplier must be 1x1");
  const double sv = s.value()(0, 0);
  Eigen::MatrixXd av = a.value();
  return make_op(sv * av, {s.node_, a.node_},
                 [sv, av](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd ds(1, 1);
                   ds(0, 0) = up.cwiseProduct(av).sum();
                   return std::vector<Eigen::MatrixXd>{std::move(ds), sv * up};
                 },
                 "scalar_mul");
}

// ---- activations ----

Tensor relu(const Tensor& a) {
  Eigen::MatrixXd av = a.value();
  return make_op(av.cwiseMax(0.0), {a.node_},
                 [av](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d =
                       up.cwiseProduct((av.array() > 0.0).cast<double>().matrix());
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "relu");
}

namespace {
Eigen::MatrixXd sigmoid_values(const Eigen::MatrixXd& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}
} // namespace

Tensor sigmoid(const Tensor& a) {
  Eigen::MatrixXd y = sigmoid_values(a.value());
  return make_op(y, {a.node_},
                 [y](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d =
                       up.cwiseProduct((y.array() * (1.0 - y.array())).matrix());
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "sigmoid");
}

Tensor swish(const Tensor& a) {
  Eigen::MatrixXd x = a.value();
  Eigen::MatrixXd s = sigmoid_values(x);
  return make_op(x.cwiseProduct(s), {a.node_},
                 [x, s](const Eigen::MatrixXd& up) {
                   // d/dx x*sigma(x) = sigma(x) (1 + x (1 - sigma(x)))
                   Eigen::ArrayXXd d = s.array() * (1.0 + x.array() * (1.0 - s.array()));
                   return std::vector<Eigen::MatrixXd>{up.cwiseProduct(d.matrix())};
                 },
                 "swish");
}

Tensor softmax_rows(const Tensor& a) {
  Eigen::MatrixXd y = a.value();
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    const double m = y.row(r).maxCoeff();
    y.row(r) = (y.row(r).array() - m).exp();
    y.row(r) /= y.row(r).sum();
  }
  return make_op(y, {a.node_},
                 [y](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d(y.rows(), y.cols());
                   for (Eigen::Index r = 0; r < y.rows(); ++r) {
                     const double dot = up.row(r).dot(y.row(r));
                     d.row(r) = (y.row(r).array() * (up.row(r).array() - dot)).matrix();
                   }
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "softmax_rows");
}

Tensor dropout(const Tensor& a, double p, Mode mode, Rng& rng) {
  if (p < 0.0 || p >= 1.0)
    fail(Errc::value, "dropout probability must lie in [0, 1)");
  if (mode == Mode::eval || p == 0.0)
    return a;
  Eigen::MatrixXd mask(a.rows(), a.cols());
  const double keep_scale = 1.0 / (1.0 - p);
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      mask(r, c) = rng.uniform() < p ? 0.0 : keep_scale;
  return make_op(a.value().cwiseProduct(mask), {a.node_},
                 [mask](const Eigen::MatrixXd& up) {
                   return std::vector<Eigen::MatrixXd>{up.cwiseProduct(mask)};
                 },
                 "dropout");
}

Tensor affine_const(const Tensor& a, double gamma, double beta) {
  return make_op((gamma * a.value().array() + beta).matrix(), {a.node_},
                 [gamma](const Eigen::MatrixXd& up) {
                   return std::vector<Eigen::MatrixXd>{gamma * up};
                 },
                 "affine_const");
}

// ---- structure ----

Tensor neighbor_sum(const Csr& adj, const Tensor& h) {
  auto shared = std::make_shared<const Csr>(adj);
  if (shared->num_nodes() != h.rows())
    fail(Errc::dimension, "neighbor_sum: adjacency and feature rows disagree");
  auto aggregate = [shared](const Eigen::MatrixXd& in) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(in.rows(), in.cols());
    for (NodeIndex v = 0; v < shared->num_nodes(); ++v)
      for (NodeIndex u : shared->neighbors(v))
        out.row(v) += in.row(u);
    return out;
  };
  return make_op(aggregate(h.value()), {h.node_},
                 [aggregate](const Eigen::MatrixXd& up) {
                   // adjacency is symmetric, so the Jacobian is A itself
                   return std::vector<Eigen::MatrixXd>{aggregate(up)};
                 },
                 "neighbor_sum");
}

Tensor mean_pool_rows(const Tensor& h) {
  const Eigen::Index n = h.rows();
  if (n < 1)
    fail(Errc::value, "mean_pool_rows requires at least one row");
  Eigen::MatrixXd out = h.value().colwise().mean();
  return make_op(std::move(out), {h.node_},
                 [n](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d = (up / static_cast<double>(n)).replicate(n, 1);
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "mean_pool_rows");
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty())
    fail(Errc::value, "concat_cols of nothing");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  Parents parents;
  std::vector<Eigen::Index> widths;
  for (const auto& p : parts) {
    if (p.rows() != rows)
      fail(Errc::dimension, "concat_cols: row counts disagree");
    cols += p.cols();
    widths.push_back(p.cols());
    parents.push_back(p.node_);
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return make_op(std::move(out), std::move(parents),
                 [widths](const Eigen::MatrixXd& up) {
                   std::vector<Eigen::MatrixXd> d;
                   Eigen::Index at = 0;
                   for (Eigen::Index w : widths) {
                     d.push_back(up.middleCols(at, w));
                     at += w;
                   }
                   return d;
                 },
                 "concat_cols");
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty())
    fail(Errc::value, "concat_rows of nothing");
  const Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  Parents parents;
  std::vector<Eigen::Index> heights;
  for (const auto& p : parts) {
    if (p.cols() != cols)
      fail(Errc::dimension, "concat_rows: column counts disagree");
    rows += p.rows();
    heights.push_back(p.rows());
    parents.push_back(p.node_);
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  return make_op(std::move(out), std::move(parents),
                 [heights](const Eigen::MatrixXd& up) {
                   std::vector<Eigen::MatrixXd> d;
                   Eigen::Index at = 0;
                   for (Eigen::Index h : heights) {
                     d.push_back(up.middleRows(at, h));
                     at += h;
                   }
                   return d;
                 },
                 "concat_rows");
}

Tensor reshape(const Tensor& a, Eigen::Index rows, Eigen::Index cols) {
  if (a.size() != rows * cols)
    fail(Errc::dimension, "reshape: element count mismatch");
  const Eigen::Index in_cols = a.cols();
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out(i / cols, i % cols) = a.value()(i / in_cols, i % in_cols);
  return make_op(std::move(out), {a.node_},
                 [rows = a.rows(), in_cols, cols](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d(rows, in_cols);
                   for (Eigen::Index i = 0; i < rows * in_cols; ++i)
                     d(i / in_cols, i % in_cols) = up(i / cols, i % cols);
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "reshape");
}

Tensor group_mean_rows(const Tensor& h, const std::vector<int>& labels, int k) {
  require_labels(labels, h.rows(), k, "group_mean_rows");
  std::vector<double> count(static_cast<std::size_t>(k), 0.0);
  for (int y : labels)
    count[static_cast<std::size_t>(y)] += 1.0;
  for (int j = 0; j < k; ++j)
    if (count[static_cast<std::size_t>(j)] == 0.0)
      fail(Errc::value, "group_mean_rows: class " + std::to_string(j) + " has no rows");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, h.cols());
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    out.row(labels[static_cast<std::size_t>(r)]) += h.value().row(r);
  for (int j = 0; j < k; ++j)
    out.row(j) /= count[static_cast<std::size_t>(j)];
  return make_op(std::move(out), {h.node_},
                 [labels, count](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d(static_cast<Eigen::Index>(labels.size()), up.cols());
                   for (Eigen::Index r = 0; r < d.rows(); ++r) {
                     const int y = labels[static_cast<std::size_t>(r)];
                     d.row(r) = up.row(y) / count[static_cast<std::size_t>(y)];
                   }
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "group_mean_rows");
}

Tensor pairwise_sqdist(const Tensor& q, const Tensor& c) {
  if (q.cols() != c.cols())
    fail(Errc::dimension, "pairwise_sqdist: widths disagree");
  Eigen::MatrixXd qv = q.value(), cv = c.value();
  Eigen::VectorXd qn = qv.rowwise().squaredNorm();
  Eigen::VectorXd cn = cv.rowwise().squaredNorm();
  Eigen::MatrixXd out = (-2.0 * qv * cv.transpose());
  out.colwise() += qn;
  out.rowwise() += cn.transpose();
  out = out.cwiseMax(0.0); // clamp tiny negative rounding
  return make_op(std::move(out), {q.node_, c.node_},
                 [qv, cv](const Eigen::MatrixXd& up) {
                   Eigen::VectorXd rsum = up.rowwise().sum();
                   Eigen::VectorXd csum = up.colwise().sum().transpose();
                   Eigen::MatrixXd dq = 2.0 * (rsum.asDiagonal() * qv - up * cv);
                   Eigen::MatrixXd dc = 2.0 * (csum.asDiagonal() * cv - up.transpose() * qv);
                   return std::vector<Eigen::MatrixXd>{std::move(dq), std::move(dc)};
                 },
                 "pairwise_sqdist");
}

Tensor cosine_matrix(const Tensor& q, const Tensor& c) {
  if (q.cols() != c.cols())
    fail(Errc::dimension, "cosine_matrix: widths disagree");
  Eigen::MatrixXd qv = q.value(), cv = c.value();
  Eigen::VectorXd qn = qv.rowwise().norm();
  Eigen::VectorXd cn = cv.rowwise().norm();
  Eigen::MatrixXd out(qv.rows(), cv.rows());
  for (Eigen::Index i = 0; i < qv.rows(); ++i)
    for (Eigen::Index j = 0; j < cv.rows(); ++j)
      out(i, j) = (qn(i) == 0.0 || cn(j) == 0.0)
                      ? 0.0
                      : qv.row(i).dot(cv.row(j)) / (qn(i) * cn(j));
  return make_op(out, {q.node_, c.node_},
                 [qv, cv, qn, cn, out](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(qv.rows(), qv.cols());
                   Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(cv.rows(), cv.cols());
                   for (Eigen::Index i = 0; i < qv.rows(); ++i)
                     for (Eigen::Index j = 0; j < cv.rows(); ++j) {
                       if (qn(i) == 0.0 || cn(j) == 0.0 || up(i, j) == 0.0)
                         continue;
                       const double inv = 1.0 / (qn(i) * cn(j));
                       dq.row(i) += up(i, j) * (cv.row(j) * inv -
                                                out(i, j) * qv.row(i) / (qn(i) * qn(i)));
                       dc.row(j) += up(i, j) * (qv.row(i) * inv -
                                                out(i, j) * cv.row(j) / (cn(j) * cn(j)));
                     }
                   return std::vector<Eigen::MatrixXd>{std::move(dq), std::move(dc)};
                 },
                 "cosine_matrix");
}

Tensor pair_concat(const Tensor& q, const Tensor& c) {
  if (q.cols() != c.cols())
    fail(Errc::dimension, "pair_concat: widths disagree");
  const Eigen::Index m = q.rows(), k = c.rows(), d = q.cols();
  Eigen::MatrixXd out(m * k, 2 * d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      out.block(i * k + j, 0, 1, d) = q.value().row(i);
      out.block(i * k + j, d, 1, d) = c.value().row(j);
    }
  return make_op(std::move(out), {q.node_, c.node_},
                 [m, k, d](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(m, d);
                   Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(k, d);
                   for (Eigen::Index i = 0; i < m; ++i)
                     for (Eigen::Index j = 0; j < k; ++j) {
                       dq.row(i) += up.block(i * k + j, 0, 1, d);
                       dc.row(j) += up.block(i * k + j, d, 1, d);
                     }
                   return std::vector<Eigen::MatrixXd>{std::move(dq), std::move(dc)};
                 },
                 "pair_concat");
}

// ---- reductions / losses ----

Tensor sum_all(const Tensor& a) {
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = a.value().sum();
  return make_op(std::move(out), {a.node_},
                 [rows = a.rows(), cols = a.cols()](const Eigen::MatrixXd& up) {
                   return std::vector<Eigen::MatrixXd>{
                       Eigen::MatrixXd::Constant(rows, cols, up(0, 0))};
                 },
                 "sum_all");
}

Tensor mean_all(const Tensor& a) { return scale(sum_all(a), 1.0 / static_cast<double>(a.size())); }

Tensor cross_entropy_sum(const Tensor& logits, const std::vector<int>& labels) {
  require_labels(labels, logits.rows(), logits.cols(), "cross_entropy_sum");
  const Eigen::MatrixXd& x = logits.value();
  Eigen::MatrixXd softmax(x.rows(), x.cols());
  double total = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double m = x.row(r).maxCoeff();
    Eigen::RowVectorXd e = (x.row(r).array() - m).exp().matrix();
    const double z = e.sum();
    softmax.row(r) = e / z;
    total += m + std::log(z) - x(r, labels[static_cast<std::size_t>(r)]);
  }
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = total;
  return make_op(std::move(out), {logits.node_},
                 [softmax, labels](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d = softmax;
                   for (Eigen::Index r = 0; r < d.rows(); ++r)
                     d(r, labels[static_cast<std::size_t>(r)]) -= 1.0;
                   return std::vector<Eigen::MatrixXd>{up(0, 0) * d};
                 },
                 "cross_entropy_sum");
}

Tensor nll_probs_sum(const Tensor& probs, const std::vector<int>& labels) {
  require_labels(labels, probs.rows(), probs.cols(), "nll_probs_sum");
  const Eigen::MatrixXd& p = probs.value();
  double total = 0.0;
  for (Eigen::Index r = 0; r < p.rows(); ++r)
    total -= std::log(p(r, labels[static_cast<std::size_t>(r)]));
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = total;
  return make_op(std::move(out), {probs.node_},
                 [p, labels](const Eigen::MatrixXd& up) {
                   Eigen::MatrixXd d = Eigen::MatrixXd::Zero(p.rows(), p.cols());
                   for (Eigen::Index r = 0; r < p.rows(); ++r) {
                     const int y = labels[static_cast<std::size_t>(r)];
                     d(r, y) = -up(0, 0) / p(r, y);
                   }
                   return std::vector<Eigen::MatrixXd>{std::move(d)};
                 },
                 "nll_probs_sum");
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& m) {
  std::vector<int> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Eigen::Index best = 0;
    m.row(r).maxCoeff(&best);
    out[static_cast<std::size_t>(r)] = static_cast<int>(best);
  }
  return out;
}

} // namespace metaview
