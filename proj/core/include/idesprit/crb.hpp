#pragma once

#include <vector>

#include "idesprit/dispersion_model.hpp"

namespace idesprit {

// Parameter vector order: [theta_1..K, phi_1..K, sigma_theta_1..K, sigma_phi_1..K,
// power_1..K, noise_var]. The first 4K entries are the parameters of interest.
std::vector<CMatrix> covariance_derivatives(const UraGeometry& g, const ModelCovParams& p);

// (5K+1) x (5K+1) Fisher information of T Gaussian snapshots under the model covariance.
RMatrix fim(const UraGeometry& g, const ModelCovParams& p, int t_count);

// Threshold (relative to the largest eigenvalue) below which a block is treated as singular.
inline constexpr double kCrbEigenFloor = 1e-12;

struct CrbResult {
  RMatrix c;  // 4K x 4K, ordered [theta.., phi.., sigma_theta.., sigma_phi..]
  int t_count = 0;
  double schur_min_eigenvalue = 0.0;
  // True when the nuisance block needed the eigenvalue-based pseudo-solve.
  bool nuisance_fallback = false;
};

// J_uu - J_uv J_vv^-1 J_vu; the second member reports whether the pseudo-solve was used.
std::pair<RMatrix, bool> schur_complement(const RMatrix& j, int k_sources);

CrbResult crb(const UraGeometry& g, const ModelCovParams& p, int t_count);

}  // namespace idesprit
