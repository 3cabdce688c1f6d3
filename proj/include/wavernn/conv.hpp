// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cstring>

#include "wavernn/types.hpp"

namespace wavernn {

// Orientation convention, fixed once and used everywhere:
//
//   out[o][i] = sum_{j,m} w[o][j][m] * h[j][(i - m + f/2) mod n]
//
// i.e. output index i reads input indices i+f/2, ..., i, ..., i-f/2 mapped to
// kernel taps 0, ..., f/2, ..., f-1.  Under this convention the kernel
// [0, 1-nu, nu] is exactly the shift matrix of make_shift_matrix(n, nu), and
// the nu=1 kernel advances a unit impulse by +1 index per step.

/// Circular 1-D convolution kernel, square in channels.
/// Weights are stored as a c x (c*f) matrix with w(o, j*f + m) = u[o][j][m].
template <typename S>
struct ConvKernel1D {
  int channels = 0;  // c (output == input channels)
  int width = 0;     // f, odd
  Mat<S> w;

  ConvKernel1D() = default;
  ConvKernel1D(int c, int f) : channels(c), width(f) {
    require(c >= 1, "ConvKernel1D: channels must be >= 1");
    require(f >= 1 && f % 2 == 1, "ConvKernel1D: width must be odd and >= 1");
    w = Mat<S>::Zero(c, c * f);
  }

  S& at(int out_ch, int in_ch, int tap) { return w(out_ch, in_ch * width + tap); }
  S at(int out_ch, int in_ch, int tap) const { return w(out_ch, in_ch * width + tap); }
};

/// Reference circular convolution over a c x n state (row per channel).
template <typename S>
Mat<S> circular_conv1d(const ConvKernel1D<S>& k, const Mat<S>& h) {
  const int c = k.channels, f = k.width;
  require(h.rows() == c, "circular_conv1d: channel count mismatch");
  const int n = static_cast<int>(h.cols());
  require(n >= f, "circular_conv1d: state length must be >= kernel width");
  Mat<S> out = Mat<S>::Zero(c, n);
  for (int o = 0; o < c; ++o)
    for (int j = 0; j < c; ++j)
      for (int m = 0; m < f; ++m) {
        const S wv = k.at(o, j, m);
        if (wv == S(0)) continue;
        const int off = f / 2 - m;
        for (int i = 0; i < n; ++i) {
          const int src = (i + off % n + n) % n;
          out(o, i) += wv * h(j, src);
        }
      }
  return out;
}

/// Circulant matrix of the discretized one-way wave equation: 1-nu on the
/// diagonal and nu on the single cyclic off-diagonal placed so that nu=1 is
/// the permutation advancing activity by +1 index per step.  Every row sums
/// to one for nu in [0,1].
template <typename S>
Mat<S> make_shift_matrix(int n, double nu) {
  require(n >= 2, "make_shift_matrix: n must be >= 2");
  require(nu >= 0.0 && nu <= 1.0, "make_shift_matrix: nu must lie in [0,1]");
  Mat<S> m = Mat<S>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = static_cast<S>(1.0 - nu);
    m(i, (i - 1 + n) % n) += static_cast<S>(nu);
  }
  return m;
}

/// Per-channel shift kernel: taps [.., 1-nu_k, nu_k, ..] centered at f/2 for
/// channel k, zero cross-channel weights.  conv_as_matrix of the result
/// equals a block-diagonal of make_shift_matrix(n, nu_k).
template <typename S>
ConvKernel1D<S> make_shift_kernel(int c, int f, const std::vector<double>& nu) {
  require(static_cast<int>(nu.size()) == c, "make_shift_kernel: one velocity per channel");
  ConvKernel1D<S> k(c, f);
  for (int ch = 0; ch < c; ++ch) {
    require(nu[ch] >= 0.0 && nu[ch] <= 1.0, "make_shift_kernel: nu must lie in [0,1]");
    require(nu[ch] == 0.0 || f >= 3, "make_shift_kernel: nu > 0 needs width >= 3");
    k.at(ch, ch, f / 2) = static_cast<S>(1.0 - nu[ch]);
    if (nu[ch] != 0.0) k.at(ch, ch, f / 2 + 1) = static_cast<S>(nu[ch]);
  }
  return k;
}

template <typename S>
ConvKernel1D<S> make_shift_kernel(int c, int f, double nu) {
  return make_shift_kernel<S>(c, f, std::vector<double>(c, nu));
}

/// Dense (c*n) x (c*n) matrix M with M * vec(h) = vec(circular_conv1d(k, h)),
/// rows/cols in channel-major order.  Test oracle and the iRNN Sigma-init.
template <typename S>
Mat<S> conv_as_matrix(const ConvKernel1D<S>& k, int n) {
  const int c = k.channels, f = k.width;
  require(n >= f, "conv_as_matrix: n must be >= kernel width");
  Mat<S> m = Mat<S>::Zero(c * n, c * n);
  for (int o = 0; o < c; ++o)
    for (int j = 0; j < c; ++j)
      for (int tap = 0; tap < f; ++tap) {
        const S wv = k.at(o, j, tap);
        if (wv == S(0)) continue;
        const int off = f / 2 - tap;
        for (int i = 0; i < n; ++i) m(o * n + i, j * n + ((i + off % n + n) % n)) += wv;
      }
  return m;
}

// ---------------------------------------------------------------------------
// Batched convolution engine.
//
// Hidden states are stored N x B (N = c*n, channel-major rows, one column per
// batch item).  The convolution is evaluated as a single GEMM against a
// gathered matrix of circularly rotated channel blocks:
//
//   taps(j*f+m, b*n+i) = H(j*n + ((i + dir*(f/2 - m)) mod n), b)
//   flat = K * taps,   flat(o, b*n+i) = out(o*n+i, b)
//
// dir=+1 evaluates the convolution, dir=-1 its transpose (for backprop).
// ---------------------------------------------------------------------------

template <typename S>
struct ConvWork {
  RowMat<S> taps;  // (c*f) x (n*B)
  RowMat<S> flat;  // c x (n*B)

  void resize(int c, int f, int n, Index batch) {
    taps.resize(c * f, n * batch);
    flat.resize(c, n * batch);
  }
};

template <typename S>
void gather_conv_taps(const Mat<S>& h, int c, int n, int f, int dir, RowMat<S>& taps) {
  const Index batch = h.cols();
  const Index big_n = h.rows();
  for (int j = 0; j < c; ++j)
    for (int m = 0; m < f; ++m) {
      const int s = ((dir * (f / 2 - m)) % n + n) % n;
      S* dst_row = taps.data() + static_cast<size_t>(j * f + m) * taps.cols();
      for (Index b = 0; b < batch; ++b) {
        const S* src = h.data() + b * big_n + static_cast<Index>(j) * n;
        S* dst = dst_row + b * n;
        std::memcpy(dst, src + s, sizeof(S) * static_cast<size_t>(n - s));
        if (s > 0) std::memcpy(dst + (n - s), src, sizeof(S) * static_cast<size_t>(s));
      }
    }
}

template <typename S>
void flatten_channels(const Mat<S>& h, int c, int n, RowMat<S>& flat) {
  const Index batch = h.cols();
  for (int o = 0; o < c; ++o) {
    S* dst_row = flat.data() + static_cast<size_t>(o) * flat.cols();
    for (Index b = 0; b < batch; ++b)
      std::memcpy(dst_row + b * n, h.data() + b * h.rows() + static_cast<Index>(o) * n,
                  sizeof(S) * static_cast<size_t>(n));
  }
}

template <typename S>
void scatter_channels(const RowMat<S>& flat, int c, int n, Mat<S>& h) {
  const Index batch = h.cols();
  for (int o = 0; o < c; ++o) {
    const S* src_row = flat.data() + static_cast<size_t>(o) * flat.cols();
    for (Index b = 0; b < batch; ++b)
      std::memcpy(h.data() + b * h.rows() + static_cast<Index>(o) * n, src_row + b * n,
                  sizeof(S) * static_cast<size_t>(n));
  }
}

/// out = circular convolution of every column of h (N x B), written in place
/// over `out` (may not alias h).
template <typename S>
void conv_forward_batched(const ConvKernel1D<S>& k, const Mat<S>& h, int n, Mat<S>& out,
                          ConvWork<S>& work) {
  const int c = k.channels, f = k.width;
  work.resize(c, f, n, h.cols());
  gather_conv_taps(h, c, n, f, +1, work.taps);
  work.flat.noalias() = k.w * work.taps;
  scatter_channels(work.flat, c, n, out);
}

/// out = transpose of the convolution applied to g; the adjoint used by BPTT.
template <typename S>
void conv_transpose_batched(const ConvKernel1D<S>& k, const Mat<S>& g, int n, Mat<S>& out,
                            ConvWork<S>& work) {
  const int c = k.channels, f = k.width;
  Mat<S> kt(c, c * f);  // kt(j, o*f+m) = w(o, j*f+m)
  for (int o = 0; o < c; ++o)
    for (int j = 0; j < c; ++j)
      for (int m = 0; m < f; ++m) kt(j, o * f + m) = k.w(o, j * f + m);
  work.resize(c, f, n, g.cols());
  gather_conv_taps(g, c, n, f, -1, work.taps);
  work.flat.noalias() = kt * work.taps;
  scatter_channels(work.flat, c, n, out);
}

/// Accumulates the kernel gradient: dk(o, j*f+m) += sum over batch and
/// positions of g(o*n+i, b) * h(j*n + (i - m + f/2 mod n), b).
template <typename S>
void conv_kernel_grad_batched(const Mat<S>& g, const Mat<S>& h, int c, int n, int f,
                              Mat<S>& dk, ConvWork<S>& work) {
  work.resize(c, f, n, h.cols());
  gather_conv_taps(h, c, n, f, +1, work.taps);
  flatten_channels(g, c, n, work.flat);
  dk.noalias() += work.flat * work.taps.transpose();
}

}  // namespace wavernn
