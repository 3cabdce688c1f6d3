// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cmath>

#include "wavernn/types.hpp"

namespace wavernn {

/// Softmax cross-entropy over columns of `logits` (classes x batch), with
/// max-subtraction for stability.  Returns the summed loss over the batch in
/// 64-bit and writes dlogits = softmax(logits) - onehot(classes), unscaled.
template <typename S>
double softmax_cross_entropy(const Mat<S>& logits, const Eigen::Ref<const Eigen::VectorXi>& classes,
                             Mat<S>& dlogits) {
  const Index k = logits.rows(), b = logits.cols();
  require(classes.size() == b, "softmax_cross_entropy: one class per column");
  dlogits.resize(k, b);
  double loss = 0.0;
  for (Index col = 0; col < b; ++col) {
    const int cls = classes(col);
    require(cls >= 0 && cls < k, "softmax_cross_entropy: class index out of range");
    const S mx = logits.col(col).maxCoeff();
    double denom = 0.0;
    for (Index r = 0; r < k; ++r) denom += std::exp(static_cast<double>(logits(r, col) - mx));
    const double log_denom = std::log(denom);
    for (Index r = 0; r < k; ++r) {
      const double p = std::exp(static_cast<double>(logits(r, col) - mx) - log_denom);
      dlogits(r, col) = static_cast<S>(p - (r == cls ? 1.0 : 0.0));
    }
    loss += log_denom - static_cast<double>(logits(cls, col) - mx);
  }
  return loss;
}

/// Column softmax probabilities (no gradient), used by the copy-task
/// probability-MSE metric and by analyze.
template <typename S>
Mat<S> softmax_columns(const Mat<S>& logits) {
  Mat<S> p(logits.rows(), logits.cols());
  for (Index col = 0; col < logits.cols(); ++col) {
    const S mx = logits.col(col).maxCoeff();
    double denom = 0.0;
    for (Index r = 0; r < logits.rows(); ++r)
      denom += std::exp(static_cast<double>(logits(r, col) - mx));
    for (Index r = 0; r < logits.rows(); ++r)
      p(r, col) = static_cast<S>(std::exp(static_cast<double>(logits(r, col) - mx)) / denom);
  }
  return p;
}

/// Mean squared error, summed over elements in 64-bit; dpred = 2*(pred - target), unscaled.
template <typename S>
double squared_error(const Mat<S>& pred, const Mat<S>& target, Mat<S>& dpred) {
  require(pred.rows() == target.rows() && pred.cols() == target.cols(),
          "squared_error: shape mismatch");
  dpred = S(2) * (pred - target);
  double loss = 0.0;
  for (Index j = 0; j < pred.cols(); ++j)
    for (Index i = 0; i < pred.rows(); ++i) {
      const double d = static_cast<double>(pred(i, j)) - static_cast<double>(target(i, j));
      loss += d * d;
    }
  return loss;
}

}  // namespace wavernn
