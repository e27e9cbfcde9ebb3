#include "idesprit/rng.hpp"

#include <cmath>

namespace idesprit {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_key(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t key = mix64(master + kGolden);
  for (std::uint64_t c : coords) {
    key = mix64(key ^ mix64(c + kGolden));
  }
  return key;
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(next_uniform()));
  const double angle = kTwoPi * next_uniform();
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::pair<double, double> CounterRng::next_complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = next_normal();
  const double im = next_normal();
  return {s * re, s * im};
}

}  // namespace idesprit
