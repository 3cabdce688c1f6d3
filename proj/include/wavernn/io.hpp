// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "wavernn/cells.hpp"
#include "wavernn/diagnostics.hpp"
#include "wavernn/sequence.hpp"

namespace wavernn {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written natively and assume a little-endian host");

namespace detail {

inline void write_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

inline uint32_t read_u32(std::istream& is, const std::string& what) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  if (!is) throw ParseError("truncated file while reading " + what + " at byte offset " +
                            std::to_string(static_cast<long long>(is.tellg())));
  return v;
}

// Tensors are stored row-major f32 regardless of the in-memory layout.
template <typename S>
void write_tensor_f32(std::ostream& os, const TensorView<S>& view) {
  std::vector<float> row(view.cols);
  for (Index r = 0; r < view.rows; ++r) {
    for (Index c = 0; c < view.cols; ++c)
      row[c] = static_cast<float>(view.data[c * view.rows + r]);
    os.write(reinterpret_cast<const char*>(row.data()), sizeof(float) * view.cols);
  }
}

template <typename S>
void read_tensor_f32(std::istream& is, TensorView<S>& view, const std::string& what) {
  std::vector<float> row(view.cols);
  for (Index r = 0; r < view.rows; ++r) {
    is.read(reinterpret_cast<char*>(row.data()), sizeof(float) * view.cols);
    if (!is) throw ParseError("truncated tensor " + what + " at byte offset " +
                              std::to_string(static_cast<long long>(is.tellg())));
    for (Index c = 0; c < view.cols; ++c) view.data[c * view.rows + r] = static_cast<S>(row[c]);
  }
}

}  // namespace detail

// --- checkpoints ("WRNC") ---------------------------------------------------
//
// magic "WRNC" | u32 version | u32 cell kind | u32 activation |
// u32 readout mode | u32 shape-int count | shape ints | tensors as
// little-endian f32, row-major, in tensor_views declaration order.

inline constexpr uint32_t kCheckpointVersion = 1;

template <typename S>
void save_checkpoint(const std::string& path, CellParams<S>& cell) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "save_checkpoint: cannot open " + path);
  os.write("WRNC", 4);
  detail::write_u32(os, kCheckpointVersion);
  detail::write_u32(os, static_cast<uint32_t>(kind_of(cell)));
  std::visit(
      [&](auto& p) {
        detail::write_u32(os, static_cast<uint32_t>(p.act));
        detail::write_u32(os, static_cast<uint32_t>(p.readout.mode));
        const uint32_t mlp_hidden =
            p.readout.mode == ReadoutMode::kFinalMlp2 ? static_cast<uint32_t>(p.readout.w1.rows()) : 0;
        if constexpr (std::decay_t<decltype(p)>::kind == CellKind::kIRnn) {
          detail::write_u32(os, 4);
          detail::write_u32(os, p.n);
          detail::write_u32(os, p.d);
          detail::write_u32(os, p.o);
          detail::write_u32(os, mlp_hidden);
        } else {
          detail::write_u32(os, 6);
          detail::write_u32(os, p.n);
          detail::write_u32(os, p.c);
          detail::write_u32(os, p.f);
          detail::write_u32(os, p.d);
          detail::write_u32(os, p.o);
          detail::write_u32(os, mlp_hidden);
        }
        for (auto& view : tensor_views(p)) detail::write_tensor_f32(os, view);
      },
      cell);
  require(static_cast<bool>(os), "save_checkpoint: write failed for " + path);
}

CellParams<float> load_checkpoint(const std::string& path);

// --- hidden trace dumps ("WRNH") --------------------------------------------
//
// magic "WRNH" | u32 version | u32 dim count (3) | dims u32 {channels, units,
// time} | states as little-endian f32, row-major (neurons-major, time-minor).

inline constexpr uint32_t kTraceVersion = 1;

template <typename S>
void dump_trace(const std::string& path, const HiddenTrace<S>& trace) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "dump_trace: cannot open " + path);
  os.write("WRNH", 4);
  detail::write_u32(os, kTraceVersion);
  detail::write_u32(os, 3);
  detail::write_u32(os, static_cast<uint32_t>(trace.channels));
  detail::write_u32(os, static_cast<uint32_t>(trace.units));
  detail::write_u32(os, static_cast<uint32_t>(trace.states.cols()));
  TensorView<S> view{"states", const_cast<S*>(trace.states.data()), trace.states.rows(),
                     trace.states.cols()};
  detail::write_tensor_f32(os, view);
  require(static_cast<bool>(os), "dump_trace: write failed for " + path);
}

template <typename S = float>
HiddenTrace<S> load_trace(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("load_trace: cannot open " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "WRNH", 4) != 0)
    throw ParseError("load_trace: bad magic at byte offset 0 in " + path);
  const uint32_t version = detail::read_u32(is, "version");
  if (version != kTraceVersion)
    throw ParseError("load_trace: unsupported version " + std::to_string(version));
  const uint32_t ndims = detail::read_u32(is, "dim count");
  if (ndims != 3) throw ParseError("load_trace: expected 3 dims, got " + std::to_string(ndims));
  HiddenTrace<S> trace;
  trace.channels = static_cast<int>(detail::read_u32(is, "channels"));
  trace.units = static_cast<int>(detail::read_u32(is, "units"));
  const uint32_t time = detail::read_u32(is, "time");
  require(trace.channels >= 1 && trace.units >= 1, "load_trace: bad shape");
  trace.states.resize(static_cast<Index>(trace.channels) * trace.units, time);
  TensorView<S> view{"states", trace.states.data(), trace.states.rows(), trace.states.cols()};
  detail::read_tensor_f32(is, view, "states");
  return trace;
}

/// Spectrum export: CSV with header exactly "k,omega,log_power".
void write_spectrum_csv(const std::string& path, const WaveSpectrum& spec, bool normalized = true);

}  // namespace wavernn
