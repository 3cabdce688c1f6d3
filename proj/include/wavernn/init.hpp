// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cmath>
#include <string>

#include "wavernn/cells.hpp"
#include "wavernn/rng.hpp"

namespace wavernn {

// Recurrent-weight initialization schemes.  "shift" places the matrix form
// of the convolution exactly on the nu=1 shift circulant per channel;
// "dirac" is the identity convolution; "random" is uniform in
// +-1/sqrt(fan_in); "multi-speed" draws one velocity per channel from U(0,1).
enum class RecurrentInit { kShift, kRandom, kDirac, kMultiSpeed, kIdentity, kSigmaShift, kVariableVelocity };

enum class EncoderInit { kSparseIdentity, kNormal };

inline const char* to_string(RecurrentInit s) {
  switch (s) {
    case RecurrentInit::kShift: return "shift";
    case RecurrentInit::kRandom: return "random";
    case RecurrentInit::kDirac: return "dirac";
    case RecurrentInit::kMultiSpeed: return "multi-speed";
    case RecurrentInit::kIdentity: return "identity";
    case RecurrentInit::kSigmaShift: return "sigma-shift";
    case RecurrentInit::kVariableVelocity: return "variable-velocity";
  }
  return "?";
}

inline RecurrentInit recurrent_init_from_string(const std::string& s) {
  if (s == "shift") return RecurrentInit::kShift;
  if (s == "random") return RecurrentInit::kRandom;
  if (s == "dirac") return RecurrentInit::kDirac;
  if (s == "multi-speed") return RecurrentInit::kMultiSpeed;
  if (s == "identity") return RecurrentInit::kIdentity;
  if (s == "sigma-shift") return RecurrentInit::kSigmaShift;
  if (s == "variable-velocity") return RecurrentInit::kVariableVelocity;
  throw std::invalid_argument("unknown recurrent init: " + s);
}

inline const char* to_string(EncoderInit s) {
  return s == EncoderInit::kSparseIdentity ? "sparse-identity" : "normal";
}

inline EncoderInit encoder_init_from_string(const std::string& s) {
  if (s == "sparse-identity") return EncoderInit::kSparseIdentity;
  if (s == "normal") return EncoderInit::kNormal;
  throw std::invalid_argument("unknown encoder init: " + s);
}

namespace detail {

// Sparse-identity encoder: all zeros except unit weights routing each input
// dimension to one source unit.  With d <= c channels each channel's unit 0
// sources input (k mod d); with d > c inputs wrap across channels, input j
// feeding channel (j mod c) at unit floor(j/c).
template <typename S>
Mat<S> sparse_identity_encoder(int n, int c, int d) {
  Mat<S> v = Mat<S>::Zero(static_cast<Index>(c) * n, d);
  if (d <= c) {
    for (int k = 0; k < c; ++k) v(static_cast<Index>(k) * n, k % d) = S(1);
  } else {
    require(d <= c * n, "sparse-identity encoder: too many input dims");
    for (int j = 0; j < d; ++j) v(static_cast<Index>(j % c) * n + j / c, j) = S(1);
  }
  return v;
}

template <typename S>
Mat<S> encoder_init(EncoderInit scheme, int n, int c, int d, Rng& rng) {
  if (scheme == EncoderInit::kSparseIdentity) return sparse_identity_encoder<S>(n, c, d);
  Mat<S> v(static_cast<Index>(c) * n, d);
  rng.fill_normal(v, 0.0, 0.001);
  return v;
}

template <typename S>
Readout<S> readout_init(ReadoutMode mode, int units, int o, int mlp_hidden, Rng& rng) {
  Readout<S> r;
  r.mode = mode;
  if (mode == ReadoutMode::kFinalScalar)
    require(o == 1, "final-scalar readout requires output dim 1");
  const int w1_rows = mode == ReadoutMode::kFinalMlp2 ? mlp_hidden : o;
  require(w1_rows >= 1, "readout: output dim must be >= 1");
  r.w1.resize(w1_rows, units);
  const double bound = 1.0 / std::sqrt(static_cast<double>(units));
  rng.fill_uniform(r.w1, -bound, bound);
  r.b1 = Vec<S>::Zero(w1_rows);
  if (mode == ReadoutMode::kFinalMlp2) {
    r.w2.resize(o, mlp_hidden);
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(mlp_hidden));
    rng.fill_uniform(r.w2, -bound2, bound2);
    r.b2 = Vec<S>::Zero(o);
  }
  return r;
}

}  // namespace detail

/// Wave-RNN initializer.  Default scheme is shift kernel + sparse-identity
/// encoder: a separate nu=1 traveling wave per channel, driven by the input
/// at one source unit.  Draw order: kernel, encoder, readout.
template <typename S>
WRnnParams<S> init_wrnn(int n, int c, int f, int d, int o, Activation act, ReadoutMode readout,
                        Rng& rng, RecurrentInit u_scheme = RecurrentInit::kShift,
                        EncoderInit v_scheme = EncoderInit::kSparseIdentity, int mlp_hidden = 0) {
  require(n >= f, "init_wrnn: n must be >= kernel width");
  WRnnParams<S> p;
  p.n = n;
  p.c = c;
  p.f = f;
  p.d = d;
  p.o = o;
  p.act = act;
  switch (u_scheme) {
    case RecurrentInit::kShift:
      p.kernel = make_shift_kernel<S>(c, f, 1.0);
      break;
    case RecurrentInit::kDirac:
      p.kernel = make_shift_kernel<S>(c, f, 0.0);
      break;
    case RecurrentInit::kRandom: {
      p.kernel = ConvKernel1D<S>(c, f);
      const double bound = 1.0 / std::sqrt(static_cast<double>(c) * f);
      rng.fill_uniform(p.kernel.w, -bound, bound);
      break;
    }
    case RecurrentInit::kMultiSpeed: {
      std::vector<double> nus(c);
      for (double& nu : nus) nu = rng.uniform();
      p.kernel = make_shift_kernel<S>(c, f, nus);
      break;
    }
    default:
      throw std::invalid_argument("init_wrnn: unsupported recurrent init " +
                                  std::string(to_string(u_scheme)));
  }
  p.encoder = detail::encoder_init<S>(v_scheme, n, c, d, rng);
  p.bias = Vec<S>::Zero(p.units());
  if (readout == ReadoutMode::kFinalMlp2 && mlp_hidden == 0) mlp_hidden = p.units();
  p.readout = detail::readout_init<S>(readout, p.units(), o, mlp_hidden, rng);
  return p;
}

/// iRNN initializer: U = I by default, or kaiming-uniform, or the nu=1 shift
/// circulant ("+ Sigma-init" ablation).  Encoder defaults to N(0, 0.001);
/// sparse-identity treats the state as a single channel.
template <typename S>
IRnnParams<S> init_irnn(int units, int d, int o, Activation act, ReadoutMode readout, Rng& rng,
                        RecurrentInit u_scheme = RecurrentInit::kIdentity,
                        EncoderInit v_scheme = EncoderInit::kNormal, int mlp_hidden = 0) {
  IRnnParams<S> p;
  p.n = units;
  p.d = d;
  p.o = o;
  p.act = act;
  switch (u_scheme) {
    case RecurrentInit::kIdentity:
      p.recur = Mat<S>::Identity(units, units);
      break;
    case RecurrentInit::kSigmaShift:
      p.recur = make_shift_matrix<S>(units, 1.0);
      break;
    case RecurrentInit::kRandom: {
      p.recur.resize(units, units);
      const double bound = 1.0 / std::sqrt(static_cast<double>(units));
      rng.fill_uniform(p.recur, -bound, bound);
      break;
    }
    default:
      throw std::invalid_argument("init_irnn: unsupported recurrent init " +
                                  std::string(to_string(u_scheme)));
  }
  p.encoder = detail::encoder_init<S>(v_scheme, units, 1, d, rng);
  p.bias = Vec<S>::Zero(units);
  if (readout == ReadoutMode::kFinalMlp2 && mlp_hidden == 0) mlp_hidden = units;
  p.readout = detail::readout_init<S>(readout, units, o, mlp_hidden, rng);
  return p;
}

/// Locally-connected initializer.  "variable-velocity" gives position i the
/// velocity 1/(i+1), a wave that slows as it propagates around the ring;
/// it exists only for this cell since a shared kernel cannot express a
/// position-dependent velocity.
template <typename S>
LocalRnnParams<S> init_local(int n, int c, int f, int d, int o, Activation act,
                             ReadoutMode readout, Rng& rng,
                             RecurrentInit scheme = RecurrentInit::kShift,
                             EncoderInit v_scheme = EncoderInit::kSparseIdentity,
                             int mlp_hidden = 0) {
  require(n >= f, "init_local: n must be >= kernel width");
  LocalRnnParams<S> p;
  p.n = n;
  p.c = c;
  p.f = f;
  p.d = d;
  p.o = o;
  p.act = act;
  p.bank = Mat<S>::Zero(static_cast<Index>(c) * n, static_cast<Index>(c) * f);
  switch (scheme) {
    case RecurrentInit::kShift:
      require(f >= 3, "init_local: shift init needs width >= 3");
      for (int ch = 0; ch < c; ++ch)
        for (int i = 0; i < n; ++i) p.bank(ch * n + i, ch * f + f / 2 + 1) = S(1);
      break;
    case RecurrentInit::kVariableVelocity:
      require(f >= 3, "init_local: variable-velocity init needs width >= 3");
      for (int ch = 0; ch < c; ++ch)
        for (int i = 0; i < n; ++i) {
          const double nu = 1.0 / (i + 1);
          p.bank(ch * n + i, ch * f + f / 2) = static_cast<S>(1.0 - nu);
          p.bank(ch * n + i, ch * f + f / 2 + 1) = static_cast<S>(nu);
        }
      break;
    case RecurrentInit::kRandom: {
      const double bound = 1.0 / std::sqrt(static_cast<double>(c) * f);
      rng.fill_uniform(p.bank, -bound, bound);
      break;
    }
    default:
      throw std::invalid_argument("init_local: unsupported recurrent init " +
                                  std::string(to_string(scheme)));
  }
  p.encoder = detail::encoder_init<S>(v_scheme, n, c, d, rng);
  p.bias = Vec<S>::Zero(p.units());
  if (readout == ReadoutMode::kFinalMlp2 && mlp_hidden == 0) mlp_hidden = p.units();
  p.readout = detail::readout_init<S>(readout, p.units(), o, mlp_hidden, rng);
  return p;
}

}  // namespace wavernn
