// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cmath>
#include <set>
#include <string>

#include "wavernn/sequence.hpp"

namespace wavernn {

/// Parameter names to exclude from training ("u"/"U"/"bank", "V", "b",
/// "W1", "b1", "W2", "b2").  Frozen gradients are exactly zero and the
/// optimizer leaves the tensors untouched.
using FreezeMask = std::set<std::string>;

/// Parameter-shaped gradient accumulators, in tensor_views order.
template <typename S>
struct Gradients {
  Mat<S> recur;    // du | dU | dbank
  Mat<S> encoder;  // dV
  Vec<S> bias;     // db
  Mat<S> w1;
  Vec<S> b1;
  Mat<S> w2;
  Vec<S> b2;
  ReadoutMode readout_mode = ReadoutMode::kFinalLinear;
};

template <typename S>
std::vector<TensorView<S>> tensor_views(Gradients<S>& g, const char* recur_name = "recur") {
  std::vector<TensorView<S>> v;
  v.push_back({recur_name, g.recur.data(), g.recur.rows(), g.recur.cols()});
  v.push_back({"V", g.encoder.data(), g.encoder.rows(), g.encoder.cols()});
  v.push_back({"b", g.bias.data(), g.bias.rows(), 1});
  v.push_back({"W1", g.w1.data(), g.w1.rows(), g.w1.cols()});
  v.push_back({"b1", g.b1.data(), g.b1.rows(), 1});
  if (g.readout_mode == ReadoutMode::kFinalMlp2) {
    v.push_back({"W2", g.w2.data(), g.w2.rows(), g.w2.cols()});
    v.push_back({"b2", g.b2.data(), g.b2.rows(), 1});
  }
  return v;
}

template <typename S>
double grad_global_norm(Gradients<S>& g) {
  double sq = 0.0;
  for (const auto& view : tensor_views(g))
    for (Index i = 0; i < view.size(); ++i) sq += static_cast<double>(view.data[i]) * view.data[i];
  return std::sqrt(sq);
}

namespace detail {

template <typename S>
Gradients<S> zero_gradients(const WRnnParams<S>& p) {
  Gradients<S> g;
  g.recur = Mat<S>::Zero(p.kernel.w.rows(), p.kernel.w.cols());
  g.encoder = Mat<S>::Zero(p.encoder.rows(), p.encoder.cols());
  g.bias = Vec<S>::Zero(p.bias.size());
  g.w1 = Mat<S>::Zero(p.readout.w1.rows(), p.readout.w1.cols());
  g.b1 = Vec<S>::Zero(p.readout.b1.size());
  g.readout_mode = p.readout.mode;
  if (p.readout.mode == ReadoutMode::kFinalMlp2) {
    g.w2 = Mat<S>::Zero(p.readout.w2.rows(), p.readout.w2.cols());
    g.b2 = Vec<S>::Zero(p.readout.b2.size());
  }
  return g;
}

template <typename S>
Gradients<S> zero_gradients(const IRnnParams<S>& p) {
  Gradients<S> g;
  g.recur = Mat<S>::Zero(p.recur.rows(), p.recur.cols());
  g.encoder = Mat<S>::Zero(p.encoder.rows(), p.encoder.cols());
  g.bias = Vec<S>::Zero(p.bias.size());
  g.w1 = Mat<S>::Zero(p.readout.w1.rows(), p.readout.w1.cols());
  g.b1 = Vec<S>::Zero(p.readout.b1.size());
  g.readout_mode = p.readout.mode;
  if (p.readout.mode == ReadoutMode::kFinalMlp2) {
    g.w2 = Mat<S>::Zero(p.readout.w2.rows(), p.readout.w2.cols());
    g.b2 = Vec<S>::Zero(p.readout.b2.size());
  }
  return g;
}

template <typename S>
Gradients<S> zero_gradients(const LocalRnnParams<S>& p) {
  Gradients<S> g;
  g.recur = Mat<S>::Zero(p.bank.rows(), p.bank.cols());
  g.encoder = Mat<S>::Zero(p.encoder.rows(), p.encoder.cols());
  g.bias = Vec<S>::Zero(p.bias.size());
  g.w1 = Mat<S>::Zero(p.readout.w1.rows(), p.readout.w1.cols());
  g.b1 = Vec<S>::Zero(p.readout.b1.size());
  g.readout_mode = p.readout.mode;
  if (p.readout.mode == ReadoutMode::kFinalMlp2) {
    g.w2 = Mat<S>::Zero(p.readout.w2.rows(), p.readout.w2.cols());
    g.b2 = Vec<S>::Zero(p.readout.b2.size());
  }
  return g;
}

template <typename S>
void recur_grad(const WRnnParams<S>& p, const Mat<S>& g, const Mat<S>& h_prev, Gradients<S>& out,
                ConvWork<S>& work) {
  conv_kernel_grad_batched(g, h_prev, p.c, p.n, p.f, out.recur, work);
}

template <typename S>
void recur_grad(const IRnnParams<S>& p, const Mat<S>& g, const Mat<S>& h_prev, Gradients<S>& out,
                ConvWork<S>&) {
  (void)p;
  out.recur.noalias() += g * h_prev.transpose();
}

template <typename S>
void recur_grad(const LocalRnnParams<S>& p, const Mat<S>& g, const Mat<S>& h_prev,
                Gradients<S>& out, ConvWork<S>&) {
  const int c = p.c, n = p.n, f = p.f;
  for (int oc = 0; oc < c; ++oc)
    for (int i = 0; i < n; ++i) {
      const int row = oc * n + i;
      for (int j = 0; j < c; ++j)
        for (int m = 0; m < f; ++m) {
          const int src = j * n + (((i - m + f / 2) % n) + n) % n;
          out.recur(row, j * f + m) += g.row(row).dot(h_prev.row(src));
        }
    }
}

}  // namespace detail

/// Exact backpropagation through time.  Requires a cache produced by
/// forward_sequence with opt.cache = true on the same batch.  Gradients are
/// means over the batch (and over timesteps in per-step mode), matching the
/// mean-loss convention.  Frozen parameters come back exactly zero.
template <typename S, typename Cell>
Gradients<S> backward_sequence(const Cell& cell, const SequenceBatch<S>& batch,
                               const ForwardCache<S>& cache, const FreezeMask& freeze = {}) {
  const int steps = batch.steps, items = batch.items;
  require(static_cast<int>(cache.h.size()) == steps + 1,
          "backward_sequence: missing forward cache");
  Gradients<S> grads = detail::zero_gradients(cell);
  const Readout<S>& ro = cell.readout;
  ConvWork<S> work;

  const S per_step_scale = steps > 0 ? S(1) / (S(items) * S(steps)) : S(1);
  const S final_scale = S(1) / S(items);

  Mat<S> dh = Mat<S>::Zero(cell.units(), items);
  Mat<S> g(cell.units(), items);
  Mat<S> dy;

  // Seed the readout gradient at the final state.
  const Mat<S>& h_final = cache.h[steps];
  switch (batch.mode) {
    case LossMode::kPerStepCategorical:
      require(static_cast<int>(cache.dstep.size()) == steps,
              "backward_sequence: per-step cache missing");
      break;
    case LossMode::kFinalCategorical:
      if (ro.mode == ReadoutMode::kFinalMlp2) {
        dy = cache.dfinal * final_scale;
        grads.w2.noalias() += dy * cache.mlp_hidden.transpose();
        grads.b2 += dy.rowwise().sum();
        Mat<S> dz = ro.w2.transpose() * dy;
        dz.array() *= (cache.mlp_hidden.array() > S(0)).template cast<S>();
        grads.w1.noalias() += dz * h_final.transpose();
        grads.b1 += dz.rowwise().sum();
        dh.noalias() = ro.w1.transpose() * dz;
      } else {
        dy = cache.dfinal * final_scale;
        grads.w1.noalias() += dy * h_final.transpose();
        grads.b1 += dy.rowwise().sum();
        dh.noalias() = ro.w1.transpose() * dy;
      }
      break;
    case LossMode::kFinalScalar:
      dy = cache.dfinal * final_scale;
      grads.w1.noalias() += dy * h_final.transpose();
      grads.b1 += dy.rowwise().sum();
      dh.noalias() = ro.w1.transpose() * dy;
      break;
  }

  for (int s = steps; s >= 1; --s) {
    if (batch.mode == LossMode::kPerStepCategorical) {
      dy = cache.dstep[s - 1] * per_step_scale;
      grads.w1.noalias() += dy * cache.h[s].transpose();
      grads.b1 += dy.rowwise().sum();
      dh.noalias() += ro.w1.transpose() * dy;
    }
    g = dh;
    scale_by_activation_grad(cell.act, cache.h[s], g);
    grads.bias += g.rowwise().sum();
    grads.encoder.noalias() += g * batch.inputs[s - 1].transpose();
    detail::recur_grad(cell, g, cache.h[s - 1], grads, work);
    recur_transpose(cell, g, dh, work);
  }

  const char* recur_name = cell.kind == CellKind::kWRnn    ? "u"
                           : cell.kind == CellKind::kIRnn  ? "U"
                                                           : "bank";
  const auto frozen = [&](const std::string& name) {
    return freeze.count(name) > 0 ||
           (name == recur_name && freeze.count("recur") > 0);
  };
  for (auto& view : tensor_views(grads, recur_name)) {
    if (frozen(view.name)) Eigen::Map<Vec<S>>(view.data, view.size()).setZero();
    if (!Eigen::Map<const Vec<S>>(view.data, view.size()).allFinite())
      throw DivergedError("backward_sequence: non-finite gradient");
  }
  return grads;
}

template <typename S>
Gradients<S> backward_sequence(const CellParams<S>& cell, const SequenceBatch<S>& batch,
                               const ForwardCache<S>& cache, const FreezeMask& freeze = {}) {
  return std::visit([&](const auto& p) { return backward_sequence(p, batch, cache, freeze); },
                    cell);
}

}  // namespace wavernn
