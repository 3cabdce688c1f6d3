// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cmath>
#include <vector>

#include "wavernn/cells.hpp"
#include "wavernn/losses.hpp"

namespace wavernn {

enum class LossMode { kPerStepCategorical, kFinalCategorical, kFinalScalar };

inline const char* to_string(LossMode m) {
  switch (m) {
    case LossMode::kPerStepCategorical: return "per-step-categorical";
    case LossMode::kFinalCategorical: return "final-categorical";
    case LossMode::kFinalScalar: return "final-scalar";
  }
  return "?";
}

/// A batch of input sequences with aligned targets.  Inputs are stored one
/// d x batch matrix per timestep; the target layout depends on the loss mode.
template <typename S>
struct SequenceBatch {
  LossMode mode = LossMode::kFinalCategorical;
  int steps = 0;  // T
  int items = 0;  // batch size
  int dim = 0;    // d
  std::vector<Mat<S>> inputs;      // steps of d x items
  Eigen::MatrixXi step_classes;    // steps x items   (per-step categorical)
  Eigen::VectorXi final_classes;   // items           (final categorical)
  Vec<S> final_values;             // items           (final scalar)
};

/// Recorded hidden states of one sequence: column t is h_t, column 0 = h_0 = 0.
template <typename S>
struct HiddenTrace {
  int channels = 1;
  int units = 0;     // n per channel
  Mat<S> states;     // (channels*units) x (T+1)
};

inline bool compatible(LossMode loss, ReadoutMode readout) {
  switch (loss) {
    case LossMode::kPerStepCategorical: return readout == ReadoutMode::kPerStepLinear;
    case LossMode::kFinalCategorical:
      return readout == ReadoutMode::kFinalLinear || readout == ReadoutMode::kFinalMlp2;
    case LossMode::kFinalScalar: return readout == ReadoutMode::kFinalScalar;
  }
  return false;
}

struct ForwardOptions {
  bool cache = false;             // keep what backward_sequence needs
  bool trace = false;             // record hidden states of batch item 0
  bool keep_step_logits = false;  // keep per-step logits (analyze / metrics)
};

template <typename S>
struct ForwardCache {
  std::vector<Mat<S>> h;        // T+1 post-activation states, units x items
  std::vector<Mat<S>> dstep;    // per-step dlogits (softmax - onehot), unscaled
  Mat<S> dfinal;                // final-mode dlogits / dpred, unscaled
  Mat<S> mlp_hidden;            // relu(W1 h_T + b1) for the mlp2 readout
};

template <typename S>
struct ForwardResult {
  double loss = 0.0;              // mean over batch (and steps, per-step mode)
  Mat<S> final_logits;            // o x items (final modes)
  std::vector<Mat<S>> step_logits;  // filled when keep_step_logits
  ForwardCache<S> cache;
  HiddenTrace<S> trace;
};

/// Runs the recurrence over the whole batch from h_0 = 0 and evaluates the
/// loss.  Per-step readouts emit y_t = W h_{t+1} (the state after consuming
/// x_t), so the prediction for sequence position t has seen inputs 0..t.
template <typename S, typename Cell>
ForwardResult<S> forward_sequence(const Cell& cell, const SequenceBatch<S>& batch,
                                  const ForwardOptions& opt = {}) {
  require(compatible(batch.mode, cell.readout.mode),
          "forward_sequence: batch loss mode incompatible with readout");
  require(batch.dim == cell.d, "forward_sequence: input dim mismatch");
  const int steps = batch.steps, items = batch.items, units = cell.units();

  ForwardResult<S> result;
  ForwardCache<S>& cache = result.cache;
  if (opt.cache) {
    cache.h.reserve(steps + 1);
    if (batch.mode == LossMode::kPerStepCategorical) cache.dstep.reserve(steps);
  }
  if (opt.trace) {
    result.trace.channels = cell.channels();
    result.trace.units = cell.ring();
    result.trace.states = Mat<S>::Zero(units, steps + 1);
  }

  ConvWork<S> work;
  Mat<S> h = Mat<S>::Zero(units, items);
  Mat<S> pre(units, items);
  Mat<S> logits, dlogits;
  if (opt.cache) cache.h.push_back(h);

  double loss_sum = 0.0;
  const Readout<S>& ro = cell.readout;

  for (int t = 0; t < steps; ++t) {
    recur_apply(cell, h, pre, work);
    pre.noalias() += cell.encoder * batch.inputs[t];
    pre.colwise() += cell.bias;
    apply_activation(cell.act, pre);
    h.swap(pre);
    if (opt.cache) cache.h.push_back(h);
    if (opt.trace) result.trace.states.col(t + 1) = h.col(0);

    if (batch.mode == LossMode::kPerStepCategorical) {
      logits.noalias() = ro.w1 * h;
      logits.colwise() += ro.b1;
      loss_sum += softmax_cross_entropy(logits, batch.step_classes.row(t).transpose(), dlogits);
      if (opt.cache) cache.dstep.push_back(dlogits);
      if (opt.keep_step_logits) result.step_logits.push_back(logits);
    }
  }

  switch (batch.mode) {
    case LossMode::kPerStepCategorical:
      result.loss = loss_sum / (static_cast<double>(items) * std::max(steps, 1));
      break;
    case LossMode::kFinalCategorical: {
      if (ro.mode == ReadoutMode::kFinalMlp2) {
        Mat<S> z = ro.w1 * h;
        z.colwise() += ro.b1;
        z = z.cwiseMax(S(0));
        if (opt.cache) cache.mlp_hidden = z;
        result.final_logits.noalias() = ro.w2 * z;
        result.final_logits.colwise() += ro.b2;
      } else {
        result.final_logits.noalias() = ro.w1 * h;
        result.final_logits.colwise() += ro.b1;
      }
      loss_sum = softmax_cross_entropy(result.final_logits, batch.final_classes, dlogits);
      if (opt.cache) cache.dfinal = dlogits;
      result.loss = loss_sum / items;
      break;
    }
    case LossMode::kFinalScalar: {
      result.final_logits.noalias() = ro.w1 * h;
      result.final_logits.colwise() += ro.b1;
      Mat<S> target = batch.final_values.transpose();
      Mat<S> dpred;
      loss_sum = squared_error(result.final_logits, target, dpred);
      if (opt.cache) cache.dfinal = dpred;
      result.loss = loss_sum / items;
      break;
    }
  }

  if (!std::isfinite(result.loss) || !h.allFinite())
    throw DivergedError("forward_sequence: non-finite loss or hidden state");
  return result;
}

template <typename S>
ForwardResult<S> forward_sequence(const CellParams<S>& cell, const SequenceBatch<S>& batch,
                                  const ForwardOptions& opt = {}) {
  return std::visit([&](const auto& p) { return forward_sequence(p, batch, opt); }, cell);
}

}  // namespace wavernn
