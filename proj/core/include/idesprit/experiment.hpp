#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "idesprit/source_sim.hpp"

namespace idesprit {

enum class ParamClass { theta, phi, sigma_theta, sigma_phi };
inline constexpr std::array<ParamClass, 4> kParamClasses{ParamClass::theta, ParamClass::phi,
                                                         ParamClass::sigma_theta,
                                                         ParamClass::sigma_phi};
std::string_view to_string(ParamClass c);
ParamClass param_class_from(std::string_view name);

struct BaselineGrid {
  double doa_half_width = deg_to_rad(1.0);
  double doa_step = deg_to_rad(0.2);
  double spread_lo = deg_to_rad(0.2);
  double spread_hi = deg_to_rad(2.0);
  double spread_step = deg_to_rad(0.2);
};

// All angles in radians. Sweepable fields are lists; at most one may hold more than
// one value. Empty optional sweeps (snr_db, spreads, k_values) leave the source list as is.
struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::array<int, 2>> geometries{{10, 10}};
  double u = kPi;
  std::vector<SourceParams> sources;
  std::vector<double> snr_db;
  std::vector<double> spreads;
  std::vector<int> k_values;
  std::vector<int> paths{50};
  int t_count = 500;
  int trials = 200;
  std::uint64_t seed = 1;
  double noise_var = 1.0;
  std::vector<std::string> estimators{"proposed"};
  bool crb = true;
  BaselineGrid grid;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// One fully specified simulation setting of a sweep.
struct SweepPoint {
  double value = 0.0;
  UraGeometry geometry{2, 2, kPi};
  std::vector<SourceParams> sources;
};

struct Sweep {
  std::string axis;  // "M", "snr_db", "spread_deg", "K", "paths" or "none"
  std::vector<SweepPoint> points;
};

Sweep expand(const ExperimentConfig& cfg);

struct RmseRow {
  std::string sweep_axis;
  double sweep_value = 0.0;
  std::string estimator;
  ParamClass param_class = ParamClass::theta;
  double rmse_deg = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
  bool operator==(const RmseRow&) const = default;
};

struct SourceRmseRow {
  std::string sweep_axis;
  double sweep_value = 0.0;
  std::string estimator;
  ParamClass param_class = ParamClass::theta;
  int source_index = 0;
  double rmse_deg = 0.0;
  bool operator==(const SourceRmseRow&) const = default;
};

struct CrbRow {
  std::string sweep_axis;
  double sweep_value = 0.0;
  ParamClass param_class = ParamClass::theta;
  int source_index = 0;
  double crb_sqrt_deg = 0.0;
  bool operator==(const CrbRow&) const = default;
};

struct DiagnosticRow {
  std::string sweep_axis;
  double sweep_value = 0.0;
  std::string name;
  double value = 0.0;
  bool operator==(const DiagnosticRow&) const = default;
};

struct RmseTable {
  std::vector<RmseRow> rows;                // class RMSE = mean of per-source RMSEs
  std::vector<SourceRmseRow> source_rows;   // per-source breakdown
  std::vector<CrbRow> crb_rows;
  std::vector<DiagnosticRow> diagnostics;
  std::vector<std::string> notes;           // free-form messages (CRB failures etc.)
};

// Minimum-cost assignment; result[i] is the column assigned to row i.
std::vector<int> hungarian(const RMatrix& cost);

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

RmseTable run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace idesprit
