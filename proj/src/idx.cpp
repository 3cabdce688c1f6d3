// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/idx.hpp"

#include <fstream>

#include "wavernn/types.hpp"

namespace wavernn {

namespace {

uint32_t read_u32_be(std::istream& is, const std::string& path) {
  uint8_t b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is)
    throw ParseError(path + ": truncated header at byte offset " +
                     std::to_string(static_cast<long long>(is.tellg())));
  return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

}  // namespace

IdxDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw ParseError("cannot open " + images_path);
  const uint32_t img_magic = read_u32_be(imgs, images_path);
  if (img_magic != 0x00000803u)
    throw ParseError(images_path + ": unexpected magic 0x" +
                     [&] {
                       char buf[16];
                       std::snprintf(buf, sizeof buf, "%08x", img_magic);
                       return std::string(buf);
                     }() +
                     " at byte offset 0 (want 0x00000803)");
  IdxDataset ds;
  ds.count = static_cast<int>(read_u32_be(imgs, images_path));
  ds.rows = static_cast<int>(read_u32_be(imgs, images_path));
  ds.cols = static_cast<int>(read_u32_be(imgs, images_path));
  if (ds.count <= 0 || ds.rows <= 0 || ds.cols <= 0)
    throw ParseError(images_path + ": non-positive dimensions in header");
  ds.images.resize(static_cast<size_t>(ds.count) * ds.rows * ds.cols);
  imgs.read(reinterpret_cast<char*>(ds.images.data()), static_cast<std::streamsize>(ds.images.size()));
  if (!imgs)
    throw ParseError(images_path + ": truncated pixel data at byte offset " +
                     std::to_string(static_cast<long long>(imgs.tellg())));

  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) throw ParseError("cannot open " + labels_path);
  const uint32_t lbl_magic = read_u32_be(labels, labels_path);
  if (lbl_magic != 0x00000801u)
    throw ParseError(labels_path + ": unexpected magic (want 0x00000801)");
  const int lbl_count = static_cast<int>(read_u32_be(labels, labels_path));
  if (lbl_count != ds.count)
    throw ParseError(labels_path + ": label count " + std::to_string(lbl_count) +
                     " does not match image count " + std::to_string(ds.count));
  ds.labels.resize(static_cast<size_t>(lbl_count));
  labels.read(reinterpret_cast<char*>(ds.labels.data()), lbl_count);
  if (!labels)
    throw ParseError(labels_path + ": truncated label data at byte offset " +
                     std::to_string(static_cast<long long>(labels.tellg())));
  return ds;
}

}  // namespace wavernn
