#pragma once

#include "idesprit/source_sim.hpp"

namespace idesprit {

struct CovarianceEstimate {
  CMatrix r_hat;  // Hermitian M x M
  int t_count = 0;
};

// (1/T) sum_t x(t) x(t)^H, symmetrized.
CovarianceEstimate sample_covariance(const CMatrix& snapshots);
CovarianceEstimate sample_covariance(const SnapshotSet& x);

// Hermitian eigendecomposition, eigenvalues descending (ties keep the solver's index order).
struct HermitianEig {
  RVector values;
  CMatrix vectors;
};
HermitianEig hermitian_eig(const CMatrix& h);

struct SubspaceSplit {
  CMatrix e_s;           // M x 3K orthonormal signal basis
  RVector sigma_s;       // 3K largest eigenvalues, descending
  double noise_var_hat;  // mean of the M - 3K smallest eigenvalues
  RVector eigen_all;     // all M eigenvalues, descending
  CMatrix eigenvectors;  // matching eigenvectors
};

SubspaceSplit subspace_split(const CovarianceEstimate& c, int k_sources);

// Minimum squared cosine of the principal angles between span(e_s) and span(a).
// 1 means identical subspaces, 0 means some direction of one is orthogonal to the other.
double subspace_alignment(const CMatrix& e_s, const CMatrix& a);

}  // namespace idesprit
