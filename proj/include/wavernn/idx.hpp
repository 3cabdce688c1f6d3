// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavernn {

/// MNIST-style dataset in IDX format: u8 images and labels.
struct IdxDataset {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> images;  // count * rows * cols
  std::vector<uint8_t> labels;  // count

  int pixels() const { return rows * cols; }
  const uint8_t* image(int i) const { return images.data() + static_cast<size_t>(i) * pixels(); }
};

/// Parses big-endian IDX headers (magic 0x00000803 for images, 0x00000801
/// for labels), validating magic numbers, dimensions and matching counts.
/// Throws ParseError naming the byte offset on malformed input.
IdxDataset load_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace wavernn
