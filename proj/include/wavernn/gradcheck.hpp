// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "wavernn/backward.hpp"

namespace wavernn {

/// Per-tensor result of a finite-difference gradient check.
struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  Index checked = 0;
  Index skipped = 0;  // coordinates excluded because a ReLU gate flipped
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;
  Index skipped = 0;
  bool passed(double tol) const { return max_rel_err < tol; }
};

namespace detail {

template <typename S>
struct Probe {
  double loss;
  std::vector<bool> gates;
};

// Loss plus the ReLU activity pattern of the pass.  Finite differences are
// invalid across a gate flip, so such coordinates are excluded (and counted).
template <typename S, typename Cell>
Probe<S> probe_loss(const Cell& cell, const SequenceBatch<S>& batch) {
  Probe<S> p;
  ForwardOptions opt;
  opt.cache = true;
  auto r = forward_sequence(cell, batch, opt);
  p.loss = r.loss;
  if (cell.act == Activation::kRelu) {
    for (const auto& h : r.cache.h)
      for (Index i = 0; i < h.size(); ++i) p.gates.push_back(h.data()[i] > S(0));
  }
  if (cell.readout.mode == ReadoutMode::kFinalMlp2) {
    const auto& z = r.cache.mlp_hidden;
    for (Index i = 0; i < z.size(); ++i) p.gates.push_back(z.data()[i] > S(0));
  }
  return p;
}

}  // namespace detail

/// Central finite differences against backward_sequence, 64-bit only.
/// Relative error per coordinate is |g_a - g_fd| / max(|g_fd|, 1e-8).
/// Frozen tensors are excluded from the comparison.  order selects the
/// stencil: 2 is the plain two-point central difference; 4 is the four-point
/// central stencil, which tolerates a larger step and so pushes roundoff
/// noise well below the comparison tolerance on big randomized sweeps.
template <typename Cell>
GradCheckReport finite_diff_check(Cell& cell, const SequenceBatch<double>& batch,
                                  double step = 1e-5, const FreezeMask& freeze = {},
                                  int order = 2) {
  require(order == 2 || order == 4, "finite_diff_check: order must be 2 or 4");
  ForwardOptions opt;
  opt.cache = true;
  auto forward = forward_sequence(cell, batch, opt);
  Gradients<double> analytic = backward_sequence(cell, batch, forward.cache, freeze);

  auto params = tensor_views(cell);
  auto gviews = tensor_views(analytic, params[0].name);

  GradCheckReport report;
  for (size_t ti = 0; ti < params.size(); ++ti) {
    const std::string name = params[ti].name;
    if (freeze.count(name) || (freeze.count("recur") && ti == 0)) continue;
    GradCheckEntry entry;
    entry.name = name;
    for (Index i = 0; i < params[ti].size(); ++i) {
      double& theta = params[ti].data[i];
      const double saved = theta;
      double g_fd = 0.0;
      bool gate_flip = false;
      if (order == 2) {
        theta = saved + step;
        const auto plus = detail::probe_loss(cell, batch);
        theta = saved - step;
        const auto minus = detail::probe_loss(cell, batch);
        gate_flip = plus.gates != minus.gates;
        g_fd = (plus.loss - minus.loss) / (2.0 * step);
      } else {
        theta = saved + step;
        const auto p1 = detail::probe_loss(cell, batch);
        theta = saved - step;
        const auto m1 = detail::probe_loss(cell, batch);
        theta = saved + 2.0 * step;
        const auto p2 = detail::probe_loss(cell, batch);
        theta = saved - 2.0 * step;
        const auto m2 = detail::probe_loss(cell, batch);
        gate_flip = p1.gates != m1.gates || p2.gates != m2.gates || p1.gates != p2.gates;
        g_fd = (8.0 * (p1.loss - m1.loss) - (p2.loss - m2.loss)) / (12.0 * step);
      }
      theta = saved;
      if (gate_flip) {
        ++entry.skipped;
        continue;
      }
      const double g_a = gviews[ti].data[i];
      const double rel = std::abs(g_a - g_fd) / std::max(std::abs(g_fd), 1e-8);
      entry.max_rel_err = std::max(entry.max_rel_err, rel);
      ++entry.checked;
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.skipped += entry.skipped;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace wavernn
