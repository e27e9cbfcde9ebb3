#pragma once

#include <cstdint>
#include <filesystem>

#include "idesprit/source_sim.hpp"

namespace idesprit {

// Little-endian snapshot dump:
//   "URAS" | version u32 | M u32 | T u32 | seed u64 | noise_var f64 | M*T complex128, column-major
inline constexpr std::uint32_t kSnapshotFormatVersion = 1;

struct SnapshotFile {
  CMatrix data;
  std::uint64_t seed = 0;
  double noise_var = 0.0;
};

void write_snapshots(const std::filesystem::path& path, const SnapshotSet& s);
SnapshotFile read_snapshots(const std::filesystem::path& path);

}  // namespace idesprit
