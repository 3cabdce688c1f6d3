// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <vector>

#include "wavernn/cifar.hpp"
#include "wavernn/idx.hpp"
#include "wavernn/rng.hpp"
#include "wavernn/sequence.hpp"

namespace wavernn {

// All generators are pure functions of (rng seed, arguments): the same seed
// always produces the same batch.

/// Copy task.  Total length T + 20: ten random categories in {1..8}, T blank
/// (category 0) steps, the delimiter category 9, then nine blanks.  Inputs
/// are one-hot over 10 categories; targets are category 0 everywhere except
/// the last ten positions, which repeat the leading data.
template <typename S>
SequenceBatch<S> copy_batch(Rng& rng, int bsz, int delay) {
  require(bsz >= 1, "copy_batch: batch size must be >= 1");
  require(delay >= 0, "copy_batch: delay must be >= 0");
  const int length = delay + 20;
  SequenceBatch<S> batch;
  batch.mode = LossMode::kPerStepCategorical;
  batch.steps = length;
  batch.items = bsz;
  batch.dim = 10;
  batch.inputs.assign(length, Mat<S>::Zero(10, bsz));
  batch.step_classes = Eigen::MatrixXi::Zero(length, bsz);
  for (int b = 0; b < bsz; ++b) {
    int data[10];
    for (int& x : data) x = static_cast<int>(rng.randint(8)) + 1;
    for (int t = 0; t < 10; ++t) batch.inputs[t](data[t], b) = S(1);
    for (int t = 10; t < 10 + delay; ++t) batch.inputs[t](0, b) = S(1);
    batch.inputs[10 + delay](9, b) = S(1);
    for (int t = 11 + delay; t < length; ++t) batch.inputs[t](0, b) = S(1);
    for (int t = 0; t < 10; ++t) batch.step_classes(length - 10 + t, b) = data[t];
  }
  return batch;
}

/// Adding task.  Dimension 0 is i.i.d. U([0,1]); dimension 1 is zero except
/// two indicator 1s, one uniform in each half of the sequence; the target is
/// the sum of the two marked dimension-0 values.
template <typename S>
SequenceBatch<S> adding_batch(Rng& rng, int bsz, int length) {
  require(bsz >= 1, "adding_batch: batch size must be >= 1");
  require(length >= 2, "adding_batch: sequence length must be >= 2");
  SequenceBatch<S> batch;
  batch.mode = LossMode::kFinalScalar;
  batch.steps = length;
  batch.items = bsz;
  batch.dim = 2;
  batch.inputs.assign(length, Mat<S>::Zero(2, bsz));
  batch.final_values.resize(bsz);
  const int half = length / 2;
  std::vector<double> stream(length);
  for (int b = 0; b < bsz; ++b) {
    for (int t = 0; t < length; ++t) {
      stream[t] = rng.uniform();
      batch.inputs[t](0, b) = static_cast<S>(stream[t]);
    }
    const int first = static_cast<int>(rng.randint(static_cast<uint64_t>(half)));
    const int second = half + static_cast<int>(rng.randint(static_cast<uint64_t>(length - half)));
    batch.inputs[first](1, b) = S(1);
    batch.inputs[second](1, b) = S(1);
    batch.final_values(b) = static_cast<S>(stream[first] + stream[second]);
  }
  return batch;
}

/// Pixel-by-pixel MNIST: T = 784, d = 1, intensities scaled to [0,1].
/// A non-null permutation gives the permuted variant; the identity
/// permutation reproduces plain sMNIST exactly.
template <typename S>
SequenceBatch<S> seq_mnist_batch(const IdxDataset& ds, const std::vector<int>& indices,
                                 const std::vector<int>* permutation = nullptr) {
  const int pixels = ds.pixels();
  if (permutation)
    require(static_cast<int>(permutation->size()) == pixels,
            "seq_mnist_batch: permutation size mismatch");
  SequenceBatch<S> batch;
  batch.mode = LossMode::kFinalCategorical;
  batch.steps = pixels;
  batch.items = static_cast<int>(indices.size());
  batch.dim = 1;
  batch.inputs.assign(pixels, Mat<S>::Zero(1, batch.items));
  batch.final_classes.resize(batch.items);
  for (int b = 0; b < batch.items; ++b) {
    const uint8_t* img = ds.image(indices[b]);
    for (int t = 0; t < pixels; ++t) {
      const int src = permutation ? (*permutation)[t] : t;
      batch.inputs[t](0, b) = static_cast<S>(img[src]) / S(255);
    }
    batch.final_classes(b) = ds.labels[indices[b]];
  }
  return batch;
}

/// Noisy sequential CIFAR10: each of the 32 image rows (32 RGB pixels,
/// flattened plane-major to d = 96) is one step, padded to T = 1000 steps
/// with i.i.d. U([0,1]) noise matching the pixel scale.
template <typename S>
SequenceBatch<S> seq_cifar_batch(const CifarDataset& ds, const std::vector<int>& indices,
                                 Rng& noise_rng, int padded_length = 1000) {
  constexpr int kRows = 32, kCols = 32, kDim = 96;
  require(padded_length >= kRows, "seq_cifar_batch: padded length must cover the image rows");
  SequenceBatch<S> batch;
  batch.mode = LossMode::kFinalCategorical;
  batch.steps = padded_length;
  batch.items = static_cast<int>(indices.size());
  batch.dim = kDim;
  batch.inputs.assign(padded_length, Mat<S>(kDim, batch.items));
  batch.final_classes.resize(batch.items);
  for (int b = 0; b < batch.items; ++b) {
    const uint8_t* img = ds.image(indices[b]);
    for (int r = 0; r < kRows; ++r)
      for (int plane = 0; plane < 3; ++plane)
        for (int col = 0; col < kCols; ++col)
          batch.inputs[r](plane * kCols + col, b) =
              static_cast<S>(img[plane * 1024 + r * kCols + col]) / S(255);
    for (int t = kRows; t < padded_length; ++t)
      for (int j = 0; j < kDim; ++j) batch.inputs[t](j, b) = static_cast<S>(noise_rng.uniform());
    batch.final_classes(b) = ds.labels[indices[b]];
  }
  return batch;
}

}  // namespace wavernn
