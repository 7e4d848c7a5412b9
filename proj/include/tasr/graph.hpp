// tasr/graph.hpp

// Copyright 2026  The tasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TASR_GRAPH_HPP
#define TASR_GRAPH_HPP

#include <deque>
#include <functional>
#include <random>
#include <vector>

#include "tasr/common.hpp"

namespace tasr {

// Reverse-mode tape over dense Eigen matrices. A graph is built once per
// forward pass; backward() walks the tape in reverse. Parameter leaves
// accumulate their gradients straight into external storage so batches can
// sum over several graphs.
template <typename Scalar>
class Graph {
 public:
  using Mat = MatrixX<Scalar>;

  struct Expr {
    int id = -1;
    bool valid() const { return id >= 0; }
  };

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  void set_rng(std::mt19937_64* rng) { rng_ = rng; }
  std::mt19937_64* rng() { return rng_; }

  const Mat& value(Expr e) const {
    const Node& n = nodes_[e.id];
    return n.external_value ? *n.external_value : n.value;
  }

  // Gradient of the last backward() target w.r.t. this node. Zero-sized if
  // the node was never reached.
  const Mat& grad(Expr e) const { return nodes_[e.id].grad; }

  Expr constant(Mat v) {
    Node n;
    n.value = std::move(v);
    n.needs_grad = false;
    return push(std::move(n));
  }

  // Leaf aliasing external parameter storage; backward adds into *grad_sink.
  Expr parameter(const Mat* value, Mat* grad_sink) {
    Node n;
    n.external_value = value;
    n.external_grad = grad_sink;
    n.needs_grad = true;
    return push(std::move(n));
  }

  // Seeds d(target)/d(target) = seed and propagates through the tape.
  void backward(Expr target, Scalar seed = Scalar(1)) {
    Node& t = nodes_[target.id];
    TASR_REQUIRE(t.needs_grad, "backward target does not depend on parameters");
    accumulate(target.id, Mat::Constant(rows(target.id), cols(target.id), seed));
    for (int id = target.id; id >= 0; --id) {
      Node& n = nodes_[id];
      if (n.needs_grad && n.grad.size() > 0 && n.backprop) n.backprop();
    }
  }

  // ---- operations ------------------------------------------------------

  Expr matmul(Expr a, Expr b) {
    const Mat& A = value(a);
    const Mat& B = value(b);
    TASR_REQUIRE(A.cols() == B.rows(), "matmul dimension mismatch");
    Node n;
    n.value = A * B;
    n.needs_grad = needs(a) || needs(b);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, a, b] {
        const Mat& g = nodes_[out].grad;
        if (needs(a)) accumulate(a.id, g * value(b).transpose());
        if (needs(b)) accumulate(b.id, value(a).transpose() * g);
      };
    return push(std::move(n));
  }

  // a * b^T without materializing the transpose in the tape.
  Expr matmul_nt(Expr a, Expr b) {
    const Mat& A = value(a);
    const Mat& B = value(b);
    TASR_REQUIRE(A.cols() == B.cols(), "matmul_nt dimension mismatch");
    Node n;
    n.value = A * B.transpose();
    n.needs_grad = needs(a) || needs(b);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, a, b] {
        const Mat& g = nodes_[out].grad;
        if (needs(a)) accumulate(a.id, g * value(b));
        if (needs(b)) accumulate(b.id, g.transpose() * value(a));
      };
    return push(std::move(n));
  }

  Expr add(Expr a, Expr b) {
    TASR_REQUIRE(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
                 "add shape mismatch");
    Node n;
    n.value = value(a) + value(b);
    n.needs_grad = needs(a) || needs(b);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, a, b] {
        const Mat& g = nodes_[out].grad;
        if (needs(a)) accumulate(a.id, g);
        if (needs(b)) accumulate(b.id, g);
      };
    return push(std::move(n));
  }

  // Broadcast a 1 x D bias over every row.
  Expr add_rowvec(Expr x, Expr bias) {
    const Mat& B = value(bias);
    TASR_REQUIRE(B.rows() == 1 && B.cols() == value(x).cols(), "bias shape mismatch");
    Node n;
    n.value = value(x).rowwise() + B.row(0);
    n.needs_grad = needs(x) || needs(bias);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x, bias] {
        const Mat& g = nodes_[out].grad;
        if (needs(x)) accumulate(x.id, g);
        if (needs(bias)) accumulate(bias.id, g.colwise().sum());
      };
    return push(std::move(n));
  }

  Expr add_constant(Expr x, Mat c) {
    TASR_REQUIRE(value(x).rows() == c.rows() && value(x).cols() == c.cols(),
                 "add_constant shape mismatch");
    Node n;
    n.value = value(x) + c;
    n.needs_grad = needs(x);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x] { accumulate(x.id, nodes_[out].grad); };
    return push(std::move(n));
  }

  Expr scale(Expr x, Scalar s) {
    Node n;
    n.value = value(x) * s;
    n.needs_grad = needs(x);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x, s] { accumulate(x.id, nodes_[out].grad * s); };
    return push(std::move(n));
  }

  Expr relu(Expr x) {
    Node n;
    n.value = value(x).cwiseMax(Scalar(0));
    n.needs_grad = needs(x);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x] {
        const Mat mask =
            (value(x).array() > Scalar(0)).template cast<Scalar>().matrix();
        accumulate(x.id, nodes_[out].grad.cwiseProduct(mask));
      };
    return push(std::move(n));
  }

  // Row-wise softmax with max subtraction.
  Expr softmax_rows(Expr x) {
    const Mat& X = value(x);
    Mat y(X.rows(), X.cols());
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      const Scalar mx = X.row(r).maxCoeff();
      VectorX<Scalar> e = (X.row(r).array() - mx).exp().matrix().transpose();
      y.row(r) = (e / e.sum()).transpose();
    }
    Node n;
    n.value = std::move(y);
    n.needs_grad = needs(x);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x] {
        const Mat& g = nodes_[out].grad;
        const Mat& y = nodes_[out].value;
        const VectorX<Scalar> dot = (g.array() * y.array()).rowwise().sum();
        const Mat gx =
            (y.array() * (g.array().colwise() - dot.array())).matrix();
        accumulate(x.id, gx);
      };
    return push(std::move(n));
  }

  // Row-wise normalization followed by a per-column affine (gain/bias are
  // 1 x D parameters). Variance uses denominator D.
  Expr layer_norm(Expr x, Expr gain, Expr bias, Scalar eps = Scalar(1e-6)) {
    const Mat& X = value(x);
    const Eigen::Index rows_n = X.rows(), dim = X.cols();
    TASR_REQUIRE(value(gain).cols() == dim && value(bias).cols() == dim,
                 "layer_norm affine shape mismatch");
    VectorX<Scalar> inv_std(rows_n);
    Mat xhat(rows_n, dim);
    for (Eigen::Index r = 0; r < rows_n; ++r) {
      const Scalar mean = X.row(r).mean();
      const Scalar var = (X.row(r).array() - mean).square().sum() / Scalar(dim);
      inv_std(r) = Scalar(1) / std::sqrt(var + eps);
      xhat.row(r) = (X.row(r).array() - mean) * inv_std(r);
    }
    Node n;
    n.value = (xhat.array().rowwise() * value(gain).row(0).array()).rowwise() +
              value(bias).row(0).array();
    n.needs_grad = needs(x) || needs(gain) || needs(bias);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x, gain, bias, xhat = std::move(xhat),
                    inv_std = std::move(inv_std)] {
        const Mat& g = nodes_[out].grad;
        if (needs(gain))
          accumulate(gain.id, (g.array() * xhat.array()).colwise().sum().matrix());
        if (needs(bias)) accumulate(bias.id, g.colwise().sum());
        if (needs(x)) {
          const Eigen::Index dim = g.cols();
          const Mat dxhat = g.array().rowwise() * value(gain).row(0).array();
          const VectorX<Scalar> mean_dxhat = dxhat.rowwise().mean();
          const VectorX<Scalar> mean_dxhat_xhat =
              (dxhat.array() * xhat.array()).rowwise().sum() / Scalar(dim);
          Mat gx = dxhat;
          gx.array().colwise() -= mean_dxhat.array();
          gx.array() -= xhat.array().colwise() * mean_dxhat_xhat.array();
          gx.array().colwise() *= inv_std.array();
          accumulate(x.id, gx);
        }
      };
    return push(std::move(n));
  }

  // Gathers rows of an embedding table; backward scatter-adds.
  Expr embedding(Expr table, std::vector<int> ids) {
    const Mat& T = value(table);
    Mat y(static_cast<Eigen::Index>(ids.size()), T.cols());
    for (size_t i = 0; i < ids.size(); ++i) {
      TASR_REQUIRE(ids[i] >= 0 && ids[i] < T.rows(), "embedding id out of range");
      y.row(static_cast<Eigen::Index>(i)) = T.row(ids[i]);
    }
    Node n;
    n.value = std::move(y);
    n.needs_grad = needs(table);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, table, ids = std::move(ids)] {
        const Mat& g = nodes_[out].grad;
        Mat gt = Mat::Zero(value(table).rows(), value(table).cols());
        for (size_t i = 0; i < ids.size(); ++i)
          gt.row(ids[i]) += g.row(static_cast<Eigen::Index>(i));
        accumulate(table.id, gt);
      };
    return push(std::move(n));
  }

  Expr slice_cols(Expr x, Eigen::Index start, Eigen::Index n_cols) {
    const Mat& X = value(x);
    TASR_REQUIRE(start >= 0 && start + n_cols <= X.cols(), "slice out of range");
    Node n;
    n.value = X.middleCols(start, n_cols);
    n.needs_grad = needs(x);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x, start, n_cols] {
        const Mat& X = value(x);
        Mat gx = Mat::Zero(X.rows(), X.cols());
        gx.middleCols(start, n_cols) = nodes_[out].grad;
        accumulate(x.id, gx);
      };
    return push(std::move(n));
  }

  Expr hconcat(const std::vector<Expr>& parts) {
    TASR_REQUIRE(!parts.empty(), "hconcat of nothing");
    const Eigen::Index rows_n = value(parts[0]).rows();
    Eigen::Index total = 0;
    bool any_grad = false;
    for (Expr p : parts) {
      TASR_REQUIRE(value(p).rows() == rows_n, "hconcat row mismatch");
      total += value(p).cols();
      any_grad = any_grad || needs(p);
    }
    Mat y(rows_n, total);
    Eigen::Index at = 0;
    for (Expr p : parts) {
      y.middleCols(at, value(p).cols()) = value(p);
      at += value(p).cols();
    }
    Node n;
    n.value = std::move(y);
    n.needs_grad = any_grad;
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, parts] {
        const Mat& g = nodes_[out].grad;
        Eigen::Index at = 0;
        for (Expr p : parts) {
          const Eigen::Index w = value(p).cols();
          if (needs(p)) accumulate(p.id, g.middleCols(at, w));
          at += w;
        }
      };
    return push(std::move(n));
  }

  // Inverted dropout; identity when rate <= 0 or no RNG is attached.
  Expr dropout(Expr x, double rate) {
    if (rate <= 0.0 || rng_ == nullptr) return x;
    TASR_REQUIRE(rate < 1.0, "dropout rate must be < 1");
    const Mat& X = value(x);
    std::bernoulli_distribution keep(1.0 - rate);
    Mat mask(X.rows(), X.cols());
    const Scalar inv_keep = Scalar(1.0 / (1.0 - rate));
    for (Eigen::Index r = 0; r < X.rows(); ++r)
      for (Eigen::Index c = 0; c < X.cols(); ++c)
        mask(r, c) = keep(*rng_) ? inv_keep : Scalar(0);
    Node n;
    n.value = X.cwiseProduct(mask);
    n.needs_grad = needs(x);
    const int out = next_id();
    if (n.needs_grad)
      n.backprop = [this, out, x, mask = std::move(mask)] {
        accumulate(x.id, nodes_[out].grad.cwiseProduct(mask));
      };
    return push(std::move(n));
  }

  // Mean over non-pad positions of cross-entropy against the smoothed
  // target distribution; see label_smoothed_loss() for the math.
  Expr smoothed_cross_entropy(Expr logits, std::vector<int> targets, Scalar eps,
                              int pad_id, int* num_tokens_out = nullptr);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Mat value;
    const Mat* external_value = nullptr;
    Mat grad;
    Mat* external_grad = nullptr;
    bool needs_grad = false;
    std::function<void()> backprop;
  };

  bool needs(Expr e) const { return nodes_[e.id].needs_grad; }
  Eigen::Index rows(int id) const {
    const Node& n = nodes_[id];
    return n.external_value ? n.external_value->rows() : n.value.rows();
  }
  Eigen::Index cols(int id) const {
    const Node& n = nodes_[id];
    return n.external_value ? n.external_value->cols() : n.value.cols();
  }

  int next_id() const { return static_cast<int>(nodes_.size()); }

  Expr push(Node n) {
    nodes_.push_back(std::move(n));
    return Expr{static_cast<int>(nodes_.size()) - 1};
  }

  template <typename Derived>
  void accumulate(int id, const Eigen::MatrixBase<Derived>& delta) {
    Node& n = nodes_[id];
    if (n.external_grad) {
      TASR_REQUIRE(n.external_grad->rows() == delta.rows() &&
                       n.external_grad->cols() == delta.cols(),
                   "parameter gradient sink has wrong shape");
      *n.external_grad += delta;
      return;
    }
    if (n.grad.size() == 0)
      n.grad = delta;
    else
      n.grad += delta;
  }

  std::deque<Node> nodes_;
  std::mt19937_64* rng_ = nullptr;
};

// Smoothed target distribution: q(target) = 1 - eps, q(k) = eps/(V-1) for
// every other class, with the pad class dropped from the support when
// pad_id >= 0. Loss is the mean cross-entropy over non-pad positions; pad
// positions contribute nothing.
template <typename Scalar>
struct SmoothedLossResult {
  Scalar loss = Scalar(0);
  MatrixX<Scalar> dlogits;  // gradient of the mean loss
  int num_tokens = 0;
};

template <typename Scalar>
SmoothedLossResult<Scalar> label_smoothed_loss(const MatrixX<Scalar>& logits,
                                               const std::vector<int>& targets,
                                               Scalar eps, int pad_id) {
  const Eigen::Index m = logits.rows();
  const Eigen::Index v = logits.cols();
  TASR_REQUIRE(static_cast<Eigen::Index>(targets.size()) == m,
               "one target per logits row required");
  TASR_REQUIRE(eps >= Scalar(0) && eps < Scalar(1), "label smoothing must be in [0,1)");

  SmoothedLossResult<Scalar> res;
  res.dlogits = MatrixX<Scalar>::Zero(m, v);
  int count = 0;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (targets[r] == pad_id) continue;
    TASR_REQUIRE(targets[r] >= 0 && targets[r] < v, "target id out of range");
    ++count;
  }
  TASR_REQUIRE(count > 0, "all target positions are padding");

  const Scalar off_mass = eps / Scalar(v - 1);
  for (Eigen::Index r = 0; r < m; ++r) {
    const int t = targets[r];
    if (t == pad_id) continue;

    const Scalar mx = logits.row(r).maxCoeff();
    const RowVectorX<Scalar> shifted = logits.row(r).array() - mx;
    const Scalar logz = std::log(shifted.array().exp().sum());
    const RowVectorX<Scalar> logp = shifted.array() - logz;
    const RowVectorX<Scalar> p = logp.array().exp();

    RowVectorX<Scalar> q = RowVectorX<Scalar>::Constant(v, off_mass);
    q(t) = Scalar(1) - eps;
    if (pad_id >= 0) q(pad_id) = Scalar(0);

    res.loss -= q.dot(logp);
    // d(-q . logp)/dlogits = p * sum(q) - q
    res.dlogits.row(r) = p * q.sum() - q;
  }
  res.loss /= Scalar(count);
  res.dlogits /= Scalar(count);
  res.num_tokens = count;
  return res;
}

template <typename Scalar>
typename Graph<Scalar>::Expr Graph<Scalar>::smoothed_cross_entropy(
    Expr logits, std::vector<int> targets, Scalar eps, int pad_id,
    int* num_tokens_out) {
  SmoothedLossResult<Scalar> res =
      label_smoothed_loss(value(logits), targets, eps, pad_id);
  if (num_tokens_out) *num_tokens_out = res.num_tokens;
  Node n;
  n.value = Mat::Constant(1, 1, res.loss);
  n.needs_grad = needs(logits);
  const int out = next_id();
  if (n.needs_grad)
    n.backprop = [this, out, logits, dl = std::move(res.dlogits)] {
      accumulate(logits.id, dl * nodes_[out].grad(0, 0));
    };
  return push(std::move(n));
}

}  // namespace tasr

#endif  // TASR_GRAPH_HPP
