#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idesprit {

struct ComplexityRow {
  std::string method;
  std::uint64_t count = 0;    // full big-O operation count
  std::uint64_t leading = 0;  // dominant term as M grows
};

struct ComplexityTable {
  std::uint64_t d1 = 0;  // joint search size over all K sources
  std::uint64_t d2 = 0;  // per-source search size
  std::vector<ComplexityRow> rows;  // proposed, subspace, dispare, comet

  const ComplexityRow& row(const std::string& method) const;
};

// proposed = M^3 + M^2 T + M K^2, subspace = DISPARE = D2 M^3 + M^2 T,
// COMET = D1 M^3 + M^2 T, with D2 = (g_doa g_spread)^2 and D1 = D2^K.
// Throws std::overflow_error when a count does not fit in 64 bits.
ComplexityTable complexity_table(std::uint64_t m, std::uint64_t t, std::uint64_t k,
                                 std::uint64_t grid_doa, std::uint64_t grid_spread);

}  // namespace idesprit
