// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#include "wavernn/cifar.hpp"

#include <fstream>

#include "wavernn/types.hpp"

namespace wavernn {

CifarDataset load_cifar10(const std::vector<std::string>& batch_files) {
  require(!batch_files.empty(), "load_cifar10: no batch files given");
  constexpr int kRecord = CifarDataset::kImageBytes + 1;
  CifarDataset ds;
  for (const auto& path : batch_files) {
    std::ifstream is(path, std::ios::binary | std::ios::ate);
    if (!is) throw ParseError("cannot open " + path);
    const auto bytes = static_cast<long long>(is.tellg());
    if (bytes <= 0 || bytes % kRecord != 0)
      throw ParseError(path + ": size " + std::to_string(bytes) +
                       " is not a multiple of the 3073-byte record");
    const int records = static_cast<int>(bytes / kRecord);
    is.seekg(0);
    std::vector<uint8_t> record(kRecord);
    for (int r = 0; r < records; ++r) {
      is.read(reinterpret_cast<char*>(record.data()), kRecord);
      if (!is)
        throw ParseError(path + ": truncated record at byte offset " +
                         std::to_string(static_cast<long long>(r) * kRecord));
      if (record[0] > 9)
        throw ParseError(path + ": label " + std::to_string(record[0]) + " out of range in record " +
                         std::to_string(r));
      ds.labels.push_back(record[0]);
      ds.images.insert(ds.images.end(), record.begin() + 1, record.end());
    }
    ds.count += records;
  }
  return ds;
}

}  // namespace wavernn
