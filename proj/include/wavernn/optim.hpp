// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cmath>
#include <vector>

#include "wavernn/backward.hpp"
#include "wavernn/cells.hpp"

namespace wavernn {

/// Step learning-rate schedule: base divided by drop_rate every drop_epoch
/// epochs.  drop_rate = 1 (or drop_epoch = 0) keeps the rate constant.
struct LrSchedule {
  double base = 1e-3;
  double drop_rate = 1.0;
  int drop_epoch = 0;
};

inline double lr_at(const LrSchedule& s, int epoch) {
  require(epoch >= 0, "lr_at: epoch must be >= 0");
  require(s.drop_rate >= 1.0, "lr_at: drop rate must be >= 1");
  if (s.drop_rate == 1.0 || s.drop_epoch <= 0) return s.base;
  return s.base * std::pow(s.drop_rate, -static_cast<double>(epoch / s.drop_epoch));
}

/// Global L2-norm gradient clipping; clip = 0 disables.
template <typename S>
double clip_gradients(Gradients<S>& grads, double clip) {
  require(clip >= 0.0, "clip_gradients: clip must be >= 0");
  const double norm = grad_global_norm(grads);
  if (clip > 0.0 && norm > clip) {
    const S scale = static_cast<S>(clip / norm);
    for (auto& view : tensor_views(grads))
      Eigen::Map<Vec<S>>(view.data, view.size()) *= scale;
  }
  return norm;
}

/// Adam with bias correction.  Moment buffers are allocated lazily on the
/// first step to match the gradient shapes; frozen tensors are untouched.
template <typename S>
struct OptState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip = 0.0;  // 0 = no clipping
  long long t = 0;
  FreezeMask freeze;
  std::vector<Vec<S>> m, v;
};

template <typename S, typename Cell>
double adam_step(OptState<S>& state, Cell& cell, Gradients<S>& grads, double lr) {
  auto params = tensor_views(cell);
  auto gviews = tensor_views(grads, params[0].name);
  require(params.size() == gviews.size(), "adam_step: parameter/gradient mismatch");

  if (state.m.empty()) {
    for (const auto& view : params) {
      state.m.push_back(Vec<S>::Zero(view.size()));
      state.v.push_back(Vec<S>::Zero(view.size()));
    }
  }

  const double pre_clip_norm = clip_gradients(grads, state.clip);
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

  for (size_t i = 0; i < params.size(); ++i) {
    require(params[i].size() == gviews[i].size(), "adam_step: tensor shape mismatch");
    auto m = state.m[i].array();
    auto v = state.v[i].array();
    const auto g = Eigen::Map<const Vec<S>>(gviews[i].data, gviews[i].size()).array();
    m = static_cast<S>(state.beta1) * m + static_cast<S>(1.0 - state.beta1) * g;
    v = static_cast<S>(state.beta2) * v + static_cast<S>(1.0 - state.beta2) * g.square();
    if (state.freeze.count(params[i].name) ||
        (state.freeze.count("recur") && i == 0)) {
      continue;
    }
    auto p = Eigen::Map<Vec<S>>(params[i].data, params[i].size()).array();
    const auto mhat = m / static_cast<S>(bc1);
    const auto vhat = v / static_cast<S>(bc2);
    p -= static_cast<S>(lr) * mhat / (vhat.sqrt() + static_cast<S>(state.eps));
    if (!p.isFinite().all()) throw DivergedError("adam_step: non-finite parameter update");
  }
  return pre_clip_norm;
}

template <typename S>
double adam_step(OptState<S>& state, CellParams<S>& cell, Gradients<S>& grads, double lr) {
  return std::visit([&](auto& p) { return adam_step(state, p, grads, lr); }, cell);
}

}  // namespace wavernn
