// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <variant>
#include <vector>

#include "wavernn/activations.hpp"
#include "wavernn/conv.hpp"
#include "wavernn/types.hpp"

namespace wavernn {

enum class CellKind { kWRnn, kIRnn, kLocalRnn };

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::kWRnn: return "wrnn";
    case CellKind::kIRnn: return "irnn";
    case CellKind::kLocalRnn: return "local";
  }
  return "?";
}

inline CellKind cell_kind_from_string(const std::string& s) {
  if (s == "wrnn") return CellKind::kWRnn;
  if (s == "irnn") return CellKind::kIRnn;
  if (s == "local") return CellKind::kLocalRnn;
  throw std::invalid_argument("unknown cell kind: " + s);
}

enum class ReadoutMode { kPerStepLinear, kFinalLinear, kFinalScalar, kFinalMlp2 };

inline const char* to_string(ReadoutMode m) {
  switch (m) {
    case ReadoutMode::kPerStepLinear: return "per-step-linear";
    case ReadoutMode::kFinalLinear: return "final-linear";
    case ReadoutMode::kFinalScalar: return "final-scalar";
    case ReadoutMode::kFinalMlp2: return "final-mlp2";
  }
  return "?";
}

inline ReadoutMode readout_from_string(const std::string& s) {
  if (s == "per-step-linear") return ReadoutMode::kPerStepLinear;
  if (s == "final-linear") return ReadoutMode::kFinalLinear;
  if (s == "final-scalar") return ReadoutMode::kFinalScalar;
  if (s == "final-mlp2") return ReadoutMode::kFinalMlp2;
  throw std::invalid_argument("unknown readout mode: " + s);
}

/// Output map from the hidden state: a linear layer, shared across timesteps
/// in per-step mode, or a 2-layer ReLU MLP applied once at the final step.
template <typename S>
struct Readout {
  ReadoutMode mode = ReadoutMode::kFinalLinear;
  Mat<S> w1;  // (o or hidden) x N
  Vec<S> b1;
  Mat<S> w2;  // o x hidden (mlp2 only, else empty)
  Vec<S> b2;
};

/// Wave-RNN: h_{t+1} = sigma(u * h_t + V x_t + b) with u a circular
/// convolution over c ring-shaped channels of n units each.
template <typename S>
struct WRnnParams {
  int n = 0, c = 0, f = 0, d = 0, o = 0;
  Activation act = Activation::kRelu;
  ConvKernel1D<S> kernel;  // u
  Mat<S> encoder;          // V: (c*n) x d
  Vec<S> bias;             // b
  Readout<S> readout;

  static constexpr CellKind kind = CellKind::kWRnn;
  int units() const { return c * n; }
  int channels() const { return c; }
  int ring() const { return n; }
};

/// Simple RNN baseline with a dense recurrent matrix.
template <typename S>
struct IRnnParams {
  int n = 0, d = 0, o = 0;  // n = total hidden units N
  Activation act = Activation::kRelu;
  Mat<S> recur;  // U: N x N
  Mat<S> encoder;
  Vec<S> bias;
  Readout<S> readout;

  static constexpr CellKind kind = CellKind::kIRnn;
  int units() const { return n; }
  int channels() const { return 1; }
  int ring() const { return n; }
};

/// Untied variant of the wRNN: one kernel per output position, same circular
/// neighborhoods.  With all position kernels equal it reproduces the wRNN.
template <typename S>
struct LocalRnnParams {
  int n = 0, c = 0, f = 0, d = 0, o = 0;
  Activation act = Activation::kRelu;
  Mat<S> bank;  // (c*n) x (c*f); bank(o*n+i, j*f+m)
  Mat<S> encoder;
  Vec<S> bias;
  Readout<S> readout;

  static constexpr CellKind kind = CellKind::kLocalRnn;
  int units() const { return c * n; }
  int channels() const { return c; }
  int ring() const { return n; }
};

template <typename S>
using CellParams = std::variant<WRnnParams<S>, IRnnParams<S>, LocalRnnParams<S>>;

template <typename S>
CellKind kind_of(const CellParams<S>& cell) {
  return std::visit([](const auto& p) { return p.kind; }, cell);
}

// --- flat tensor access (optimizer, serialization, gradient checks) --------

template <typename S>
struct TensorView {
  const char* name;
  S* data;
  Index rows, cols;  // logical shape; buffer is column-major rows x cols
  Index size() const { return rows * cols; }
};

namespace detail {
template <typename S>
void readout_views(Readout<S>& r, std::vector<TensorView<S>>& out) {
  out.push_back({"W1", r.w1.data(), r.w1.rows(), r.w1.cols()});
  out.push_back({"b1", r.b1.data(), r.b1.rows(), 1});
  if (r.mode == ReadoutMode::kFinalMlp2) {
    out.push_back({"W2", r.w2.data(), r.w2.rows(), r.w2.cols()});
    out.push_back({"b2", r.b2.data(), r.b2.rows(), 1});
  }
}
}  // namespace detail

/// Parameter tensors in declaration order: recurrent weights, encoder V,
/// bias b, then readout.  The order defines the checkpoint layout.
template <typename S>
std::vector<TensorView<S>> tensor_views(WRnnParams<S>& p) {
  std::vector<TensorView<S>> v;
  v.push_back({"u", p.kernel.w.data(), p.kernel.w.rows(), p.kernel.w.cols()});
  v.push_back({"V", p.encoder.data(), p.encoder.rows(), p.encoder.cols()});
  v.push_back({"b", p.bias.data(), p.bias.rows(), 1});
  detail::readout_views(p.readout, v);
  return v;
}

template <typename S>
std::vector<TensorView<S>> tensor_views(IRnnParams<S>& p) {
  std::vector<TensorView<S>> v;
  v.push_back({"U", p.recur.data(), p.recur.rows(), p.recur.cols()});
  v.push_back({"V", p.encoder.data(), p.encoder.rows(), p.encoder.cols()});
  v.push_back({"b", p.bias.data(), p.bias.rows(), 1});
  detail::readout_views(p.readout, v);
  return v;
}

template <typename S>
std::vector<TensorView<S>> tensor_views(LocalRnnParams<S>& p) {
  std::vector<TensorView<S>> v;
  v.push_back({"bank", p.bank.data(), p.bank.rows(), p.bank.cols()});
  v.push_back({"V", p.encoder.data(), p.encoder.rows(), p.encoder.cols()});
  v.push_back({"b", p.bias.data(), p.bias.rows(), 1});
  detail::readout_views(p.readout, v);
  return v;
}

template <typename S>
std::vector<TensorView<S>> tensor_views(CellParams<S>& cell) {
  return std::visit([](auto& p) { return tensor_views(p); }, cell);
}

template <typename S>
Index param_count(CellParams<S>& cell) {
  Index total = 0;
  for (const auto& view : tensor_views(cell)) total += view.size();
  return total;
}

// --- recurrent operator dispatch --------------------------------------------

template <typename S>
void recur_apply(const WRnnParams<S>& p, const Mat<S>& h, Mat<S>& out, ConvWork<S>& work) {
  conv_forward_batched(p.kernel, h, p.n, out, work);
}

template <typename S>
void recur_apply(const IRnnParams<S>& p, const Mat<S>& h, Mat<S>& out, ConvWork<S>&) {
  out.noalias() = p.recur * h;
}

template <typename S>
void recur_apply(const LocalRnnParams<S>& p, const Mat<S>& h, Mat<S>& out, ConvWork<S>&) {
  const int c = p.c, n = p.n, f = p.f;
  out.setZero();
  for (int oc = 0; oc < c; ++oc)
    for (int i = 0; i < n; ++i) {
      const int row = oc * n + i;
      for (int j = 0; j < c; ++j)
        for (int m = 0; m < f; ++m) {
          const S wv = p.bank(row, j * f + m);
          if (wv == S(0)) continue;
          const int src = j * n + (((i - m + f / 2) % n) + n) % n;
          out.row(row) += wv * h.row(src);
        }
    }
}

template <typename S>
void recur_transpose(const WRnnParams<S>& p, const Mat<S>& g, Mat<S>& out, ConvWork<S>& work) {
  conv_transpose_batched(p.kernel, g, p.n, out, work);
}

template <typename S>
void recur_transpose(const IRnnParams<S>& p, const Mat<S>& g, Mat<S>& out, ConvWork<S>&) {
  out.noalias() = p.recur.transpose() * g;
}

template <typename S>
void recur_transpose(const LocalRnnParams<S>& p, const Mat<S>& g, Mat<S>& out, ConvWork<S>&) {
  const int c = p.c, n = p.n, f = p.f;
  out.setZero();
  for (int oc = 0; oc < c; ++oc)
    for (int i = 0; i < n; ++i) {
      const int row = oc * n + i;
      for (int j = 0; j < c; ++j)
        for (int m = 0; m < f; ++m) {
          const S wv = p.bank(row, j * f + m);
          if (wv == S(0)) continue;
          const int src = j * n + (((i - m + f / 2) % n) + n) % n;
          out.row(src) += wv * g.row(row);
        }
    }
}

/// One recurrence step over a batch: columns of h are independent states.
/// Throws DivergedError if the result is not finite.
template <typename S, typename Cell>
Mat<S> step(const Cell& cell, const Mat<S>& h, const Mat<S>& x) {
  require(h.rows() == cell.units() && x.rows() == cell.d && h.cols() == x.cols(),
          "step: shape mismatch");
  ConvWork<S> work;
  Mat<S> pre(h.rows(), h.cols());
  recur_apply(cell, h, pre, work);
  pre.noalias() += cell.encoder * x;
  pre.colwise() += cell.bias;
  apply_activation(cell.act, pre);
  if (!pre.allFinite()) throw DivergedError("step: non-finite hidden state");
  return pre;
}

template <typename S>
Mat<S> step(const CellParams<S>& cell, const Mat<S>& h, const Mat<S>& x) {
  return std::visit([&](const auto& p) { return step(p, h, x); }, cell);
}

}  // namespace wavernn
