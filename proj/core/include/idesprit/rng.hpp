#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>

namespace idesprit {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Derive a stream key from a master seed and a tuple of stream coordinates.
std::uint64_t derive_key(std::uint64_t master, std::initializer_list<std::uint64_t> coords);

// Counter-based generator: output i is mix64(key + (i+1) * golden). Streams with
// different keys are independent of one another and of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  // Uniform on (0, 1].
  double next_uniform();
  // Standard normal via Box-Muller; caches the second deviate.
  double next_normal();
  // Circular complex normal with E|z|^2 = variance.
  std::pair<double, double> next_complex_normal(double variance);
  bool next_bit() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace idesprit
