#include "idesprit/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace idesprit {

CovarianceEstimate sample_covariance(const CMatrix& snapshots) {
  const auto t_count = snapshots.cols();
  if (t_count < 1) {
    throw DimensionError("sample_covariance: need at least one snapshot");
  }
  CMatrix r = snapshots * snapshots.adjoint();
  r /= static_cast<double>(t_count);
  CMatrix herm = 0.5 * (r + r.adjoint());
  return {std::move(herm), static_cast<int>(t_count)};
}

CovarianceEstimate sample_covariance(const SnapshotSet& x) { return sample_covariance(x.data); }

HermitianEig hermitian_eig(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  const auto n = h.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const RVector& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });
  HermitianEig out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = vals(order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

SubspaceSplit subspace_split(const CovarianceEstimate& c, int k_sources) {
  const auto m = static_cast<int>(c.r_hat.rows());
  const int dim = 3 * k_sources;
  if (k_sources < 1 || dim >= m) {
    throw DimensionError("subspace_split: need 1 <= K and 3K < M (3K=" + std::to_string(dim) +
                         ", M=" + std::to_string(m) + ")");
  }
  HermitianEig eig = hermitian_eig(c.r_hat);
  SubspaceSplit s;
  s.e_s = eig.vectors.leftCols(dim);
  s.sigma_s = eig.values.head(dim);
  s.noise_var_hat = eig.values.tail(m - dim).mean();
  s.eigen_all = std::move(eig.values);
  s.eigenvectors = std::move(eig.vectors);
  return s;
}

namespace {

CMatrix orthonormal_basis(const CMatrix& x, const char* what) {
  Eigen::ColPivHouseholderQR<CMatrix> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) {
    throw RankDeficientError(std::string("subspace_alignment: ") + what + " is rank deficient",
                             -1, -1);
  }
  CMatrix q = qr.householderQ();
  return q.leftCols(x.cols());
}

}  // namespace

double subspace_alignment(const CMatrix& e_s, const CMatrix& a) {
  if (e_s.rows() != a.rows() || e_s.cols() != a.cols()) {
    throw DimensionError("subspace_alignment: bases must have identical shape");
  }
  const CMatrix qa = orthonormal_basis(a, "response matrix");
  const CMatrix qe = orthonormal_basis(e_s, "subspace basis");
  Eigen::JacobiSVD<CMatrix> svd(qe.adjoint() * qa);
  const double c = std::min(1.0, svd.singularValues().minCoeff());
  return c * c;
}

}  // namespace idesprit
