// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavernn {

/// CIFAR-10 images in the binary batch layout: per image 1024 red, 1024
/// green, 1024 blue bytes, each plane row-major 32x32.
struct CifarDataset {
  static constexpr int kImageBytes = 3072;
  int count = 0;
  std::vector<uint8_t> images;  // count * 3072
  std::vector<uint8_t> labels;

  const uint8_t* image(int i) const { return images.data() + static_cast<size_t>(i) * kImageBytes; }
};

/// Reads one or more CIFAR-10 binary batch files (3073-byte records:
/// label byte + 3072 pixel bytes).  Throws ParseError on malformed files.
CifarDataset load_cifar10(const std::vector<std::string>& batch_files);

}  // namespace wavernn
