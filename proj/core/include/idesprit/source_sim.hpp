#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "idesprit/array_model.hpp"

namespace idesprit {

// Upper bound on angular spread (radians); spreads above kSpreadWarn are accepted with a warning.
inline constexpr double kSpreadLimit = 0.2;
inline constexpr double kSpreadWarn = 0.05;
// Per-path elevations are kept inside [kElevationGuard, pi/2 - kElevationGuard].
inline constexpr double kElevationGuard = 1e-9;

struct SourceParams {
  AngPair nominal;
  double sigma_theta = 0.0;    // azimuth spread, rad
  double sigma_phi = 0.0;      // elevation spread, rad
  double sigma_gamma_sq = 1.0; // total path-gain variance
  double power = 1.0;          // |s_k(t)|^2
  int n_paths = 1;
};

// Throws std::invalid_argument on violations; returns human-readable warnings otherwise.
std::vector<std::string> validate(const SourceParams& s);

struct SnapshotSet {
  CMatrix data;  // M x T, column t is x(t)
  UraGeometry geometry;
  int t_count = 0;
  std::uint64_t seed = 0;
  double noise_var = 0.0;
  // Number of per-path elevation draws that had to be pulled back inside the range.
  std::size_t clamp_count = 0;
};

// x(t) = sum_k s_k(t) sum_j gamma_kj(t) a(theta_kj(t), phi_kj(t)) + n(t) with BPSK s_k,
// circular Gaussian gains of variance sigma_gamma^2 / N_k, Gaussian angular deviations
// and circular white noise. Output depends only on the arguments.
SnapshotSet generate(const UraGeometry& g, std::span<const SourceParams> sources, int t_count,
                     double noise_var, std::uint64_t seed);

struct SnrReport {
  double ratio_db;  // 10 log10(S_k sigma_gamma^2 / sigma_n^2)
  double power;     // S_k as quoted when sigma_gamma^2 = sigma_n^2 = 1
};

std::vector<SnrReport> snr_of(std::span<const SourceParams> sources, double noise_var);

// Inverse of the ratio convention: the S_k that gives `snr_db` for the given variances.
double power_for_snr_db(double snr_db, double sigma_gamma_sq, double noise_var);

}  // namespace idesprit
