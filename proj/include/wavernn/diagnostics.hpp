// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wavernn/rng.hpp"
#include "wavernn/sequence.hpp"

namespace wavernn {

/// Shuffle-normalized 2D power over (spatial frequency k, temporal frequency
/// omega), nonnegative-frequency quadrant only.  A wave traveling toward
/// increasing unit indices at velocity v concentrates power on the line
/// omega = v * k (physical frequency units); log_power is the natural log of
/// |DFT2| divided by the geometric mean |DFT2| of space-and-time shuffled
/// copies, log_power_raw the unnormalized log.
struct WaveSpectrum {
  int space = 0;  // n of the analyzed slab
  int time = 0;   // number of time samples
  Eigen::MatrixXd log_power;      // (n/2+1) x (time/2+1)
  Eigen::MatrixXd log_power_raw;  // same shape, no shuffle normalization
  int shuffles = 0;
  uint64_t shuffle_seed = 0;
  double velocity = 0.0;        // filled by estimate_velocity
  double velocity_score = 0.0;  // band-energy fraction at the estimate
};

namespace detail {

/// Full-plane |DFT2| of a real matrix, via dense complex DFT matrices.
/// Space uses the e^{-ikx} convention and time e^{+iwt}, so that activity
/// moving toward increasing unit indices at velocity v shows up at positive
/// (k, w) pairs on the line w = v * k * (T/n) in bin units.
inline Eigen::MatrixXd dft2_magnitude(const Eigen::MatrixXd& slab) {
  using Cplx = std::complex<double>;
  const Index rows = slab.rows(), cols = slab.cols();
  Eigen::MatrixXcd wr(rows, rows), wc(cols, cols);
  for (Index k = 0; k < rows; ++k)
    for (Index x = 0; x < rows; ++x) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * x % rows) / rows;
      wr(k, x) = Cplx(std::cos(ang), std::sin(ang));
    }
  for (Index w = 0; w < cols; ++w)
    for (Index t = 0; t < cols; ++t) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(w * t % cols) / cols;
      wc(t, w) = Cplx(std::cos(ang), std::sin(ang));
    }
  Eigen::MatrixXcd f = wr * slab.cast<Cplx>() * wc;
  return f.cwiseAbs();
}

}  // namespace detail

/// 2D spectrum of one channel's (units x time) slab of a hidden trace.
/// Shuffle normalization divides by the mean magnitude spectrum of
/// `shuffles` independent permutations of the flattened (space, time)
/// entries; shuffles = 0 leaves the spectrum unnormalized.
template <typename S>
WaveSpectrum power_spectrum_2d(const HiddenTrace<S>& trace, int channel, int shuffles, Rng& rng) {
  require(channel >= 0 && channel < trace.channels, "power_spectrum_2d: channel out of range");
  const int n = trace.units;
  const int time = static_cast<int>(trace.states.cols());
  require(time >= 8, "power_spectrum_2d: need at least 8 timesteps");
  require(shuffles >= 0, "power_spectrum_2d: shuffle count must be >= 0");

  Eigen::MatrixXd slab =
      trace.states.block(static_cast<Index>(channel) * n, 0, n, time).template cast<double>();
  const double mean = slab.mean();
  if ((slab.array() - mean).abs().maxCoeff() == 0.0)
    throw std::invalid_argument("power_spectrum_2d: zero-variance trace");

  const Eigen::MatrixXd mag = detail::dft2_magnitude(slab);

  // Geometric mean of the shuffled magnitude spectra.  For structureless
  // data the log-ratio is then unbiased around zero, which an arithmetic
  // mean would miss by about -0.17 (Jensen gap of the log).
  constexpr double kFloor = 1e-300;
  Eigen::MatrixXd norm_log;
  if (shuffles > 0) {
    norm_log = Eigen::MatrixXd::Zero(n, time);
    std::vector<double> flat(slab.data(), slab.data() + slab.size());
    Eigen::MatrixXd shuffled(n, time);
    for (int s = 0; s < shuffles; ++s) {
      for (size_t i = flat.size() - 1; i > 0; --i) {
        const size_t j = rng.randint(i + 1);
        std::swap(flat[i], flat[j]);
      }
      std::copy(flat.begin(), flat.end(), shuffled.data());
      norm_log += detail::dft2_magnitude(shuffled).cwiseMax(kFloor).array().log().matrix();
    }
    norm_log /= shuffles;
  }

  WaveSpectrum spec;
  spec.space = n;
  spec.time = time;
  spec.shuffles = shuffles;
  spec.shuffle_seed = rng.seed();
  const int kq = n / 2 + 1, wq = time / 2 + 1;
  spec.log_power.resize(kq, wq);
  spec.log_power_raw.resize(kq, wq);
  for (int k = 0; k < kq; ++k)
    for (int w = 0; w < wq; ++w) {
      spec.log_power_raw(k, w) = std::log(std::max(mag(k, w), kFloor));
      spec.log_power(k, w) =
          spec.log_power_raw(k, w) - (shuffles > 0 ? norm_log(k, w) : 0.0);
    }
  return spec;
}

/// Scans candidate velocities over a log-spaced grid, summing normalized
/// power in a one-bin-wide band around the line omega = v*k (DC row and
/// column excluded).  Returns the best velocity and its band-energy
/// fraction, and stamps both into the spectrum.
///
/// Resolution cutoff: a spatial-frequency column contributes only where the
/// line has climbed at least one full bin above the first measurable
/// temporal frequency (v*k*T/n >= 2).  Below that the band is
/// indistinguishable from the omega <= 1 window artifact, and slow
/// candidate lines would otherwise degenerate into horizontal strips that
/// credit plain autocorrelation as a wave.
inline constexpr double kVelocityBandMinCenter = 2.0;

inline std::pair<double, double> estimate_velocity(WaveSpectrum& spec, double v_lo = 0.05,
                                                   double v_hi = 5.0, int points = 200) {
  require(v_lo > 0 && v_hi > v_lo && points >= 2, "estimate_velocity: bad grid");
  const int kq = static_cast<int>(spec.log_power.rows());
  const int wq = static_cast<int>(spec.log_power.cols());
  const Eigen::MatrixXd power = spec.log_power.array().exp();

  double total = 0.0;
  for (int k = 1; k < kq; ++k)
    for (int w = 1; w < wq; ++w) total += power(k, w);

  double best_v = v_lo, best_score = -1.0;
  const double bins_per_unit = static_cast<double>(spec.time) / spec.space;
  for (int i = 0; i < points; ++i) {
    const double v = v_lo * std::pow(v_hi / v_lo, static_cast<double>(i) / (points - 1));
    double band = 0.0;
    for (int k = 1; k < kq; ++k) {
      const double center = v * k * bins_per_unit;
      if (center < kVelocityBandMinCenter) continue;
      const int w_min = std::max(1, static_cast<int>(std::ceil(center - 1.0)));
      const int w_max = std::min(wq - 1, static_cast<int>(std::floor(center + 1.0)));
      for (int w = w_min; w <= w_max; ++w) band += power(k, w);
    }
    const double score = total > 0 ? band / total : 0.0;
    if (score > best_score) {
      best_score = score;
      best_v = v;
    }
  }
  spec.velocity = best_v;
  spec.velocity_score = best_score;
  return {best_v, best_score};
}

/// Neurons ordered by the time index of their maximum activation, ties
/// broken by neuron index.  A clean shift-register trace sorts to the
/// identity permutation.
template <typename S>
std::vector<int> onset_sort(const HiddenTrace<S>& trace) {
  const Index rows = trace.states.rows();
  require(rows > 0 && trace.states.cols() > 0, "onset_sort: empty trace");
  std::vector<int> onset(rows);
  for (Index r = 0; r < rows; ++r) {
    Index at = 0;
    trace.states.row(r).maxCoeff(&at);
    onset[r] = static_cast<int>(at);
  }
  std::vector<int> order(rows);
  for (Index i = 0; i < rows; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return onset[a] != onset[b] ? onset[a] < onset[b] : a < b; });
  return order;
}

/// Trace with rows permuted so that row r of the result is neuron order[r].
template <typename S>
HiddenTrace<S> reorder_neurons(const HiddenTrace<S>& trace, const std::vector<int>& order) {
  require(static_cast<Index>(order.size()) == trace.states.rows(),
          "reorder_neurons: permutation size mismatch");
  HiddenTrace<S> out;
  out.channels = 1;
  out.units = static_cast<int>(trace.states.rows());
  out.states.resize(trace.states.rows(), trace.states.cols());
  for (size_t r = 0; r < order.size(); ++r) out.states.row(r) = trace.states.row(order[r]);
  return out;
}

/// Synthetic constant-velocity wave h[x, t] = sin(2*pi*(x - v*t)/n), the
/// calibration signal for the velocity estimator.
template <typename S>
HiddenTrace<S> synthetic_wave_trace(int n, int time, double velocity, double phase = 0.0) {
  HiddenTrace<S> t;
  t.channels = 1;
  t.units = n;
  t.states.resize(n, time);
  for (int x = 0; x < n; ++x)
    for (int ts = 0; ts < time; ++ts)
      t.states(x, ts) = static_cast<S>(
          std::sin(2.0 * std::numbers::pi * (x - velocity * ts) / n + phase));
  return t;
}

}  // namespace wavernn
