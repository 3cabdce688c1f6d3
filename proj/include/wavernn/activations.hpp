// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include "wavernn/types.hpp"

namespace wavernn {

enum class Activation { kRelu, kTanh, kIdentity };

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  if (s == "identity" || s == "linear") return Activation::kIdentity;
  throw std::invalid_argument("unknown activation: " + s);
}

/// In-place activation. ReLU subgradient at 0 is 0.
template <typename S>
void apply_activation(Activation a, Mat<S>& x) {
  switch (a) {
    case Activation::kRelu:
      x = x.cwiseMax(S(0));
      break;
    case Activation::kTanh:
      x = x.array().tanh().matrix();
      break;
    case Activation::kIdentity:
      break;
  }
}

/// Multiplies g elementwise by sigma'(a) where `post` = sigma(a).  All three
/// supported activations admit exact derivatives from the post-activation:
/// relu' = [post > 0], tanh' = 1 - post^2, identity' = 1.
template <typename S>
void scale_by_activation_grad(Activation a, const Mat<S>& post, Mat<S>& g) {
  switch (a) {
    case Activation::kRelu:
      g.array() *= (post.array() > S(0)).template cast<S>();
      break;
    case Activation::kTanh:
      g.array() *= (S(1) - post.array().square());
      break;
    case Activation::kIdentity:
      break;
  }
}

}  // namespace wavernn
