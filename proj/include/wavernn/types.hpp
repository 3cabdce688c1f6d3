// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wavernn {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Thrown when a forward/backward pass or an optimizer step produces a
/// non-finite value; the harness maps it to run status "diverged".
struct DivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed binary inputs (checkpoints, traces, IDX/CIFAR files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace wavernn
