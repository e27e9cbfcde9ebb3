#include "idesprit/esprit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace idesprit {

SelectedSubspaces select_subspaces(const CMatrix& e_s, const UraGeometry& g) {
  if (e_s.rows() != g.size()) {
    throw DimensionError("select_subspaces: basis has " + std::to_string(e_s.rows()) +
                         " rows, geometry has " + std::to_string(g.size()) + " elements");
  }
  return {selection(g, 1).apply(e_s), selection(g, 2).apply(e_s), selection(g, 3).apply(e_s)};
}

CMatrix tls_transform(const CMatrix& e1, const CMatrix& eq) {
  if (e1.rows() != eq.rows() || e1.cols() != eq.cols()) {
    throw DimensionError("tls_transform: operands differ in shape");
  }
  const auto n = e1.cols();
  if (e1.rows() < n) {
    throw DimensionError("tls_transform: need at least " + std::to_string(n) + " rows");
  }
  CMatrix stacked(e1.rows(), 2 * n);
  stacked << e1, eq;
  const CMatrix gram = stacked.adjoint() * stacked;
  const HermitianEig eig = hermitian_eig(0.5 * (gram + gram.adjoint()));
  const CMatrix v12 = eig.vectors.block(0, n, n, n);
  const CMatrix v22 = eig.vectors.block(n, n, n, n);

  Eigen::JacobiSVD<CMatrix> svd(v22);
  const RVector& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > kTlsConditionLimit) {
    throw SingularPartitionError("tls_transform: E22 block is singular (cond > 1e12)");
  }
  // -V12 * V22^-1 via a right solve.
  const CMatrix x = v22.transpose().partialPivLu().solve(v12.transpose()).transpose();
  return -x;
}

namespace {

struct EigResult {
  CVector values;
  CMatrix vectors;
};

EigResult general_eig(const CMatrix& a, const char* what) {
  Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(std::string("match_eigenvalues: EVD of ") + what + " failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Phase in (-pi, pi]; std::arg returns [-pi, pi].
double phase(cdouble z) {
  const double p = std::arg(z);
  return p == -kPi ? kPi : p;
}

}  // namespace

MatchedEigenvalues match_eigenvalues(const PsiPair& psi) {
  const auto n = psi.psi1.rows();
  if (n == 0 || n % 3 != 0 || psi.psi1.cols() != n || psi.psi2.rows() != n ||
      psi.psi2.cols() != n) {
    throw DimensionError("match_eigenvalues: expected two 3K x 3K matrices");
  }
  const auto k = n / 3;

  {
    Eigen::JacobiSVD<CMatrix> svd(psi.psi2);
    const RVector& sv = svd.singularValues();
    if (!(sv(n - 1) > sv(0) * 1e-14)) {
      throw std::runtime_error("match_eigenvalues: Psi2 is singular");
    }
  }

  const EigResult e1 = general_eig(psi.psi1, "Psi1");
  const EigResult e2 = general_eig(psi.psi2, "Psi2");
  const EigResult e3 = general_eig(psi.psi1 * psi.psi2, "Psi3");

  // Psi1 * Psi2^-1 = (Psi2^-T Psi1^T)^T.
  const CMatrix quotient = psi.psi2.transpose().partialPivLu().solve(psi.psi1.transpose()).transpose();
  const CMatrix psi4 = e3.vectors.partialPivLu().solve(quotient * e3.vectors);

  MatchedEigenvalues out;
  {
    const double total = psi4.squaredNorm();
    const double diag = psi4.diagonal().squaredNorm();
    out.psi4_offdiag_ratio = total > 0.0 ? std::max(0.0, total - diag) / total : 0.0;
  }

  std::vector<bool> used2(static_cast<std::size_t>(n), false);
  std::vector<bool> used3(static_cast<std::size_t>(n), false);
  std::vector<cdouble> partner(static_cast<std::size_t>(n));
  for (Eigen::Index p = 0; p < n; ++p) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best2 = -1;
    Eigen::Index best3 = -1;
    for (Eigen::Index p2 = 0; p2 < n; ++p2) {
      if (used2[static_cast<std::size_t>(p2)]) continue;
      const cdouble beta1 = e1.values(p) * e2.values(p2);
      const cdouble beta2 = e1.values(p) / e2.values(p2);
      for (Eigen::Index p3 = 0; p3 < n; ++p3) {
        if (used3[static_cast<std::size_t>(p3)]) continue;
        const double mu = std::norm(beta1 - e3.values(p3)) + std::norm(beta2 - psi4(p3, p3));
        if (mu < best) {
          best = mu;
          best2 = p2;
          best3 = p3;
        }
      }
    }
    if (best2 < 0) {
      throw std::runtime_error("match_eigenvalues: non-finite eigenvalues");
    }
    used2[static_cast<std::size_t>(best2)] = true;
    used3[static_cast<std::size_t>(best3)] = true;
    partner[static_cast<std::size_t>(p)] = e2.values(best2);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double pa = phase(e1.values(a));
    const double pb = phase(e1.values(b));
    if (pa != pb) return pa > pb;
    return std::abs(e1.values(a)) > std::abs(e1.values(b));
  });

  out.lambda1.reserve(static_cast<std::size_t>(n));
  out.lambda2.reserve(static_cast<std::size_t>(n));
  for (const auto i : order) {
    out.lambda1.push_back(e1.values(i));
    out.lambda2.push_back(partner[static_cast<std::size_t>(i)]);
  }
  double max_spread = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index s = 0; s < k; ++s) {
    const int b = static_cast<int>(3 * s);
    out.grouping.push_back({b, b + 1, b + 2});
    max_spread = std::max(max_spread, phase(out.lambda1[static_cast<std::size_t>(b)]) -
                                          phase(out.lambda1[static_cast<std::size_t>(b + 2)]));
    if (s > 0) {
      min_gap = std::min(min_gap, phase(out.lambda1[static_cast<std::size_t>(b - 1)]) -
                                      phase(out.lambda1[static_cast<std::size_t>(b)]));
    }
  }
  if (k == 1) {
    out.grouping_confidence = std::numeric_limits<double>::infinity();
  } else if (max_spread > 0.0) {
    out.grouping_confidence = min_gap / max_spread;
  } else {
    out.grouping_confidence = std::numeric_limits<double>::infinity();
  }
  return out;
}

DoaRecovery recover_doas(const MatchedEigenvalues& m, double u) {
  if (!(u > 0.0)) {
    throw std::invalid_argument("recover_doas: u must be positive");
  }
  DoaRecovery out;
  const double theta_max = std::nextafter(kPi, 0.0);
  const double phi_max = std::nextafter(kPi / 2.0, 0.0);
  for (const auto& triple : m.grouping) {
    double theta_sum = 0.0;
    double phi_sum = 0.0;
    for (const int idx : triple) {
      const double x = std::log(m.lambda1.at(static_cast<std::size_t>(idx))).imag();
      double y = std::log(m.lambda2.at(static_cast<std::size_t>(idx))).imag();
      if (y < 0.0) {
        // sin(theta) >= 0 on the localization range: move to the nearer end of [0, pi]
        // on the circle (values just below -pi came from phases just above pi).
        y = y < -kPi / 2.0 ? kPi : 0.0;
        ++out.clamp_count;
      }
      theta_sum += (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
      double s = std::sqrt(x * x + y * y) / u;
      if (s > 1.0) {
        s = 1.0;
        ++out.clamp_count;
      }
      phi_sum += std::asin(s);
    }
    AngPair a{theta_sum / 3.0, phi_sum / 3.0};
    if (a.theta > theta_max) {
      a.theta = theta_max;
      ++out.clamp_count;
    }
    if (a.phi > phi_max) {
      a.phi = phi_max;
      ++out.clamp_count;
    }
    out.doas.push_back(a);
  }
  return out;
}

namespace {

std::pair<int, int> closest_pair(const std::vector<AngPair>& doas) {
  std::pair<int, int> best{0, doas.size() > 1 ? 1 : 0};
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < doas.size(); ++i) {
    for (std::size_t j = i + 1; j < doas.size(); ++j) {
      const double d = std::hypot(doas[i].theta - doas[j].theta, doas[i].phi - doas[j].phi);
      if (d < dmin) {
        dmin = d;
        best = {static_cast<int>(i), static_cast<int>(j)};
      }
    }
  }
  return best;
}

}  // namespace

SpreadRecovery recover_spreads(const UraGeometry& g, const std::vector<AngPair>& doas,
                               const CovarianceEstimate& c, double noise_var_hat) {
  const int k = static_cast<int>(doas.size());
  const CMatrix a = response_matrix(g, doas);
  if (c.r_hat.rows() != a.rows()) {
    throw DimensionError("recover_spreads: covariance does not match geometry");
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double cutoff = kPinvCutoff * sv(0);
  if (!(sv(sv.size() - 1) > cutoff)) {
    const auto [i, j] = closest_pair(doas);
    throw RankDeficientError("recover_spreads: response matrix is rank deficient; sources " +
                                 std::to_string(i) + " and " + std::to_string(j) +
                                 " are indistinguishable",
                             i, j);
  }
  // A^+ = V S^-1 U^H
  const CMatrix pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  CMatrix centered = c.r_hat;
  centered.diagonal().array() -= noise_var_hat;
  const CMatrix lambda_c = pinv * centered * pinv.adjoint();

  SpreadRecovery out;
  out.lambda_c_hat = lambda_c.diagonal().real();
  auto ratio = [&](int num, int den) {
    const double r = out.lambda_c_hat(num) / out.lambda_c_hat(den);
    if (!(r > 0.0)) {
      ++out.floored_count;
      return 0.0;
    }
    return std::sqrt(r);
  };
  for (int s = 0; s < k; ++s) {
    out.sigma_theta.push_back(ratio(k + s, s));
    out.sigma_phi.push_back(ratio(2 * k + s, s));
  }
  return out;
}

namespace {

template <class F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const EstimationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EstimationError(stage, e.what());
  }
}

DoaRecovery doas_from_basis(const CMatrix& e_s, const UraGeometry& g, MatchedEigenvalues* keep) {
  const SelectedSubspaces sel =
      run_stage("select_subspaces", [&] { return select_subspaces(e_s, g); });
  PsiPair psi = run_stage("tls_transform", [&] {
    return PsiPair{tls_transform(sel.e1, sel.e2), tls_transform(sel.e1, sel.e3)};
  });
  MatchedEigenvalues m = run_stage("match_eigenvalues", [&] { return match_eigenvalues(psi); });
  DoaRecovery d = run_stage("recover_doas", [&] { return recover_doas(m, g.u()); });
  if (keep != nullptr) *keep = std::move(m);
  return d;
}

}  // namespace

DoaRecovery estimate_doas_from_subspace(const CMatrix& e_s, const UraGeometry& g, int k_sources) {
  if (e_s.cols() != 3 * k_sources) {
    throw DimensionError("estimate_doas_from_subspace: basis must have 3K columns");
  }
  return doas_from_basis(e_s, g, nullptr);
}

AngularEstimate estimate(const CovarianceEstimate& c, const UraGeometry& g, int k_sources) {
  const SubspaceSplit split =
      run_stage("subspace_split", [&] { return subspace_split(c, k_sources); });
  MatchedEigenvalues m;
  const DoaRecovery d = doas_from_basis(split.e_s, g, &m);
  const SpreadRecovery s = run_stage(
      "recover_spreads", [&] { return recover_spreads(g, d.doas, c, split.noise_var_hat); });

  AngularEstimate out;
  out.noise_var_hat = split.noise_var_hat;
  out.lambda_c_hat = s.lambda_c_hat;
  out.grouping_confidence = m.grouping_confidence;
  out.psi4_offdiag_ratio = m.psi4_offdiag_ratio;
  out.doa_clamp_count = d.clamp_count;
  out.spread_floor_count = s.floored_count;
  for (int k = 0; k < k_sources; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out.sources.push_back({d.doas[i].theta, d.doas[i].phi, s.sigma_theta[i], s.sigma_phi[i]});
  }
  std::stable_sort(out.sources.begin(), out.sources.end(),
                   [](const SourceEstimate& a, const SourceEstimate& b) { return a.theta < b.theta; });
  return out;
}

AngularEstimate estimate(const SnapshotSet& x, int k_sources) {
  if (x.t_count < 1 || x.data.cols() < 1) {
    throw EstimationError("sample_covariance", "need at least one snapshot");
  }
  const CovarianceEstimate c = sample_covariance(x);
  return estimate(c, x.geometry, k_sources);
}

}  // namespace idesprit
