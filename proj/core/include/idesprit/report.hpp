#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idesprit/complexity.hpp"
#include "idesprit/experiment.hpp"

namespace idesprit {

struct ComplexityPoint {
  std::uint64_t m = 0;
  std::uint64_t t = 0;
  std::uint64_t k = 0;
  ComplexityTable table;
};

std::string rmse_csv(const RmseTable& t);
std::string source_rmse_csv(const RmseTable& t);
std::string crb_csv(const RmseTable& t);
std::string diagnostics_csv(const RmseTable& t);
std::string complexity_csv(std::span<const ComplexityPoint> points);

std::vector<RmseRow> parse_rmse_csv(std::string_view text);
std::vector<CrbRow> parse_crb_csv(std::string_view text);

// Log-y line plot of one parameter class: one line per estimator plus the mean CRB.
std::string svg_plot(const RmseTable& t, ParamClass c);

// Writes via a temporary file in the same directory followed by rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// rmse.csv, rmse_by_source.csv, crb.csv, diagnostics.csv, complexity.csv and
// rmse_<class>.svg for each parameter class. Returns the written paths.
std::vector<std::filesystem::path> emit(const RmseTable& t, std::span<const ComplexityPoint> cx,
                                        const std::filesystem::path& dir);

}  // namespace idesprit
