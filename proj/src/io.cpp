// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/io.hpp"

#include <cstring>

namespace wavernn {

namespace {

Readout<float> make_readout(ReadoutMode mode, int units, int o, int mlp_hidden) {
  Readout<float> r;
  r.mode = mode;
  const int w1_rows = mode == ReadoutMode::kFinalMlp2 ? mlp_hidden : o;
  r.w1 = Mat<float>::Zero(w1_rows, units);
  r.b1 = Vec<float>::Zero(w1_rows);
  if (mode == ReadoutMode::kFinalMlp2) {
    r.w2 = Mat<float>::Zero(o, mlp_hidden);
    r.b2 = Vec<float>::Zero(o);
  }
  return r;
}

}  // namespace

CellParams<float> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("load_checkpoint: cannot open " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "WRNC", 4) != 0)
    throw ParseError("load_checkpoint: bad magic at byte offset 0 in " + path);
  const uint32_t version = detail::read_u32(is, "version");
  if (version != kCheckpointVersion)
    throw ParseError("load_checkpoint: unsupported version " + std::to_string(version));
  const auto kind = static_cast<CellKind>(detail::read_u32(is, "cell kind"));
  const auto act = static_cast<Activation>(detail::read_u32(is, "activation"));
  const auto mode = static_cast<ReadoutMode>(detail::read_u32(is, "readout mode"));
  const uint32_t nshape = detail::read_u32(is, "shape count");
  std::vector<uint32_t> shape(nshape);
  for (auto& s : shape) s = detail::read_u32(is, "shape");

  CellParams<float> cell;
  switch (kind) {
    case CellKind::kIRnn: {
      if (nshape != 4) throw ParseError("load_checkpoint: irnn expects 4 shape ints");
      IRnnParams<float> p;
      p.n = static_cast<int>(shape[0]);
      p.d = static_cast<int>(shape[1]);
      p.o = static_cast<int>(shape[2]);
      p.act = act;
      p.recur = Mat<float>::Zero(p.n, p.n);
      p.encoder = Mat<float>::Zero(p.n, p.d);
      p.bias = Vec<float>::Zero(p.n);
      p.readout = make_readout(mode, p.n, p.o, static_cast<int>(shape[3]));
      cell = std::move(p);
      break;
    }
    case CellKind::kWRnn: {
      if (nshape != 6) throw ParseError("load_checkpoint: wrnn expects 6 shape ints");
      WRnnParams<float> p;
      p.n = static_cast<int>(shape[0]);
      p.c = static_cast<int>(shape[1]);
      p.f = static_cast<int>(shape[2]);
      p.d = static_cast<int>(shape[3]);
      p.o = static_cast<int>(shape[4]);
      p.act = act;
      p.kernel = ConvKernel1D<float>(p.c, p.f);
      p.encoder = Mat<float>::Zero(p.units(), p.d);
      p.bias = Vec<float>::Zero(p.units());
      p.readout = make_readout(mode, p.units(), p.o, static_cast<int>(shape[5]));
      cell = std::move(p);
      break;
    }
    case CellKind::kLocalRnn: {
      if (nshape != 6) throw ParseError("load_checkpoint: local cell expects 6 shape ints");
      LocalRnnParams<float> p;
      p.n = static_cast<int>(shape[0]);
      p.c = static_cast<int>(shape[1]);
      p.f = static_cast<int>(shape[2]);
      p.d = static_cast<int>(shape[3]);
      p.o = static_cast<int>(shape[4]);
      p.act = act;
      p.bank = Mat<float>::Zero(static_cast<Index>(p.c) * p.n, static_cast<Index>(p.c) * p.f);
      p.encoder = Mat<float>::Zero(p.units(), p.d);
      p.bias = Vec<float>::Zero(p.units());
      p.readout = make_readout(mode, p.units(), p.o, static_cast<int>(shape[5]));
      cell = std::move(p);
      break;
    }
    default:
      throw ParseError("load_checkpoint: unknown cell kind tag");
  }
  for (auto& view : tensor_views(cell)) detail::read_tensor_f32(is, view, view.name);
  return cell;
}

void write_spectrum_csv(const std::string& path, const WaveSpectrum& spec, bool normalized) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "write_spectrum_csv: cannot open " + path);
  const auto& m = normalized ? spec.log_power : spec.log_power_raw;
  os << "k,omega,log_power\n";
  for (Index k = 0; k < m.rows(); ++k)
    for (Index w = 0; w < m.cols(); ++w) os << k << "," << w << "," << m(k, w) << "\n";
  require(static_cast<bool>(os), "write_spectrum_csv: write failed for " + path);
}

}  // namespace wavernn
