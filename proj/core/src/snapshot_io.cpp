#include "idesprit/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace idesprit {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::vector<char>& buf, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw std::runtime_error("truncated snapshot file: " + path.string());
  }
  return value;
}

}  // namespace

void write_snapshots(const std::filesystem::path& path, const SnapshotSet& s) {
  const auto rows = static_cast<std::uint32_t>(s.data.rows());
  const auto cols = static_cast<std::uint32_t>(s.data.cols());
  std::vector<char> buf;
  buf.reserve(32 + static_cast<std::size_t>(rows) * cols * 16);
  buf.insert(buf.end(), {'U', 'R', 'A', 'S'});
  put(buf, kSnapshotFormatVersion);
  put(buf, rows);
  put(buf, cols);
  put(buf, s.seed);
  put(buf, s.noise_var);
  for (Eigen::Index t = 0; t < s.data.cols(); ++t) {
    for (Eigen::Index m = 0; m < s.data.rows(); ++m) {
      put(buf, s.data(m, t).real());
      put(buf, s.data(m, t).imag());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size()))) {
    throw std::runtime_error("cannot write snapshot file: " + path.string());
  }
}

SnapshotFile read_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open snapshot file: " + path.string());
  }
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::memcmp(magic.data(), "URAS", 4) != 0) {
    throw std::runtime_error("bad snapshot magic in " + path.string());
  }
  const auto version = take<std::uint32_t>(in, path);
  if (version != kSnapshotFormatVersion) {
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  }
  const auto rows = take<std::uint32_t>(in, path);
  const auto cols = take<std::uint32_t>(in, path);
  SnapshotFile f;
  f.seed = take<std::uint64_t>(in, path);
  f.noise_var = take<double>(in, path);
  f.data.resize(rows, cols);
  for (std::uint32_t t = 0; t < cols; ++t) {
    for (std::uint32_t m = 0; m < rows; ++m) {
      const double re = take<double>(in, path);
      const double im = take<double>(in, path);
      f.data(m, t) = cdouble(re, im);
    }
  }
  return f;
}

}  // namespace idesprit
