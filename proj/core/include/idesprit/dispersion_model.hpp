#pragma once

#include <array>
#include <span>
#include <vector>

#include "idesprit/array_model.hpp"

namespace idesprit {

// One distributed source in the Gaussian-kernel covariance model.
struct DispersedSource {
  AngPair nominal;
  double sigma_theta = 0.0;
  double sigma_phi = 0.0;
  double power = 1.0;  // sigma_k^2 = S_k * sigma_gamma_k^2
};

struct ModelCovParams {
  std::vector<DispersedSource> sources;
  double noise_var = 1.0;
};

// Kernel value exp(-(u^2/2)[...]) at each element offset (dx, dy).
RVector b_offset_values(const UraGeometry& g, const DispersedSource& s,
                        std::span<const std::array<int, 2>> offsets);

// Real symmetric spread kernel B: entry (m, n) depends only on the element offset.
RMatrix b_matrix(const UraGeometry& g, const DispersedSource& s);

// Elementwise log-derivatives of B, so that dB/dxi = B .* L_xi.
struct BLogDerivatives {
  RMatrix d_theta;
  RMatrix d_phi;
  RMatrix d_sigma_theta;
  RMatrix d_sigma_phi;
};

BLogDerivatives b_log_derivatives(const UraGeometry& g, const DispersedSource& s);

// Xi = D B D^H with D = diag(a(theta, phi)).
CMatrix xi_matrix(const UraGeometry& g, const DispersedSource& s);

// sum_k sigma_k^2 Xi_k + sigma_n^2 I
CMatrix model_covariance(const UraGeometry& g, const ModelCovParams& p);

}  // namespace idesprit
