#include "idesprit/complexity.hpp"

#include <stdexcept>

namespace idesprit {

namespace {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("complexity count overflows");
  return r;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("complexity count overflows");
  return r;
}

}  // namespace

const ComplexityRow& ComplexityTable::row(const std::string& method) const {
  for (const auto& r : rows) {
    if (r.method == method) return r;
  }
  throw std::out_of_range("no complexity row '" + method + "'");
}

ComplexityTable complexity_table(std::uint64_t m, std::uint64_t t, std::uint64_t k,
                                 std::uint64_t grid_doa, std::uint64_t grid_spread) {
  ComplexityTable out;
  const std::uint64_t per_param = mul(grid_doa, grid_spread);
  out.d2 = mul(per_param, per_param);
  out.d1 = 1;
  for (std::uint64_t i = 0; i < k; ++i) out.d1 = mul(out.d1, out.d2);

  const std::uint64_t m3 = mul(mul(m, m), m);
  const std::uint64_t m2t = mul(mul(m, m), t);
  const std::uint64_t proposed = add(add(m3, m2t), mul(m, mul(k, k)));
  const std::uint64_t search2 = add(mul(out.d2, m3), m2t);
  const std::uint64_t search1 = add(mul(out.d1, m3), m2t);
  out.rows = {{"proposed", proposed, m3},
              {"subspace", search2, mul(out.d2, m3)},
              {"dispare", search2, mul(out.d2, m3)},
              {"comet", search1, mul(out.d1, m3)}};
  return out;
}

}  // namespace idesprit
