#pragma once

#include <array>
#include <vector>

#include "idesprit/spectral.hpp"

namespace idesprit {

struct SelectedSubspaces {
  CMatrix e1;  // J_1 E_s
  CMatrix e2;  // J_2 E_s (x shift)
  CMatrix e3;  // J_3 E_s (y shift)
};

SelectedSubspaces select_subspaces(const CMatrix& e_s, const UraGeometry& g);

// Condition number of E22 above which the TLS solution is rejected.
inline constexpr double kTlsConditionLimit = 1e12;

// Total least-squares solution Psi of e_q ~= e1 * Psi.
CMatrix tls_transform(const CMatrix& e1, const CMatrix& eq);

struct PsiPair {
  CMatrix psi1;
  CMatrix psi2;
};

struct MatchedEigenvalues {
  std::vector<cdouble> lambda1;  // sorted by phase, descending
  std::vector<cdouble> lambda2;  // partner of lambda1[p]
  std::vector<std::array<int, 3>> grouping;
  // Smallest gap between neighbouring triples over the largest spread inside a triple.
  double grouping_confidence = 0.0;
  // Off-diagonal Frobenius energy of T3^-1 Psi1 Psi2^-1 T3 relative to its total energy.
  double psi4_offdiag_ratio = 0.0;
};

MatchedEigenvalues match_eigenvalues(const PsiPair& psi);

struct DoaRecovery {
  std::vector<AngPair> doas;
  int clamp_count = 0;
};

DoaRecovery recover_doas(const MatchedEigenvalues& m, double u);

inline constexpr double kPinvCutoff = 1e-10;

struct SpreadRecovery {
  std::vector<double> sigma_theta;
  std::vector<double> sigma_phi;
  RVector lambda_c_hat;  // real diagonal of the estimated 3K x 3K source matrix
  int floored_count = 0;
};

SpreadRecovery recover_spreads(const UraGeometry& g, const std::vector<AngPair>& doas,
                               const CovarianceEstimate& c, double noise_var_hat);

struct SourceEstimate {
  double theta = 0.0;
  double phi = 0.0;
  double sigma_theta = 0.0;
  double sigma_phi = 0.0;
};

struct AngularEstimate {
  std::vector<SourceEstimate> sources;  // sorted by theta ascending
  double noise_var_hat = 0.0;
  RVector lambda_c_hat;  // in the order the sources left the matcher
  double grouping_confidence = 0.0;
  double psi4_offdiag_ratio = 0.0;
  int doa_clamp_count = 0;
  int spread_floor_count = 0;
};

// DOAs from a known signal-subspace basis (no spreads).
DoaRecovery estimate_doas_from_subspace(const CMatrix& e_s, const UraGeometry& g, int k_sources);

AngularEstimate estimate(const CovarianceEstimate& c, const UraGeometry& g, int k_sources);
AngularEstimate estimate(const SnapshotSet& x, int k_sources);

}  // namespace idesprit
