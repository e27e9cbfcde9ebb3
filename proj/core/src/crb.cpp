#include "idesprit/crb.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace idesprit {

std::vector<CMatrix> covariance_derivatives(const UraGeometry& g, const ModelCovParams& p) {
  const int k = static_cast<int>(p.sources.size());
  const int m = g.size();
  const double u = g.u();
  std::vector<CMatrix> d(static_cast<std::size_t>(5 * k + 1));
  for (int s = 0; s < k; ++s) {
    const DispersedSource& src = p.sources[static_cast<std::size_t>(s)];
    const CMatrix xi = xi_matrix(g, src);
    const BLogDerivatives l = b_log_derivatives(g, src);
    const double ct = std::cos(src.nominal.theta);
    const double st = std::sin(src.nominal.theta);
    const double cp = std::cos(src.nominal.phi);
    const double sp = std::sin(src.nominal.phi);
    // Phase rates of the steering vector: da/dxi = i * rate .* a.
    RVector rate_t(m);
    RVector rate_p(m);
    for (int e = 0; e < m; ++e) {
      const double x = g.x_of(e);
      const double y = g.y_of(e);
      rate_t(e) = u * sp * (-x * st + y * ct);
      rate_p(e) = u * cp * (x * ct + y * st);
    }
    CMatrix dt(m, m);
    CMatrix dp(m, m);
    for (int n = 0; n < m; ++n) {
      for (int r = 0; r < m; ++r) {
        const cdouble v = src.power * xi(r, n);
        dt(r, n) = v * cdouble(l.d_theta(r, n), rate_t(r) - rate_t(n));
        dp(r, n) = v * cdouble(l.d_phi(r, n), rate_p(r) - rate_p(n));
      }
    }
    d[static_cast<std::size_t>(s)] = std::move(dt);
    d[static_cast<std::size_t>(k + s)] = std::move(dp);
    d[static_cast<std::size_t>(2 * k + s)] =
        src.power * xi.cwiseProduct(l.d_sigma_theta.cast<cdouble>());
    d[static_cast<std::size_t>(3 * k + s)] =
        src.power * xi.cwiseProduct(l.d_sigma_phi.cast<cdouble>());
    d[static_cast<std::size_t>(4 * k + s)] = xi;
  }
  d.back() = CMatrix::Identity(m, m);
  return d;
}

RMatrix fim(const UraGeometry& g, const ModelCovParams& p, int t_count) {
  if (t_count < 1) {
    throw std::invalid_argument("fim: T must be positive");
  }
  const CMatrix r = model_covariance(g, p);
  Eigen::LLT<CMatrix> llt(r);
  if (llt.info() != Eigen::Success) {
    throw UnidentifiableError("fim: model covariance is not positive definite");
  }
  const std::vector<CMatrix> d = covariance_derivatives(g, p);
  std::vector<CMatrix> w;
  w.reserve(d.size());
  for (const auto& dq : d) {
    w.push_back(llt.solve(dq));
  }
  const auto n = static_cast<Eigen::Index>(d.size());
  RMatrix j(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      // tr(W_a W_b) = sum_ij W_a(i,j) W_b(j,i)
      const double v = w[static_cast<std::size_t>(a)]
                           .cwiseProduct(w[static_cast<std::size_t>(b)].transpose())
                           .sum()
                           .real();
      j(a, b) = j(b, a) = static_cast<double>(t_count) * v;
    }
  }
  return j;
}

std::pair<RMatrix, bool> schur_complement(const RMatrix& j, int k_sources) {
  const int nu = 4 * k_sources;
  const int nv = k_sources + 1;
  if (j.rows() != nu + nv || j.cols() != nu + nv) {
    throw DimensionError("schur_complement: FIM size does not match K");
  }
  const RMatrix juu = j.topLeftCorner(nu, nu);
  const RMatrix juv = j.topRightCorner(nu, nv);
  const RMatrix jvv = j.bottomRightCorner(nv, nv);

  bool fallback = false;
  RMatrix x;  // J_vv^-1 J_vu
  Eigen::SelfAdjointEigenSolver<RMatrix> es(jvv);
  const double vmax = es.eigenvalues().maxCoeff();
  const double vmin = es.eigenvalues().minCoeff();
  if (vmin > kCrbEigenFloor * vmax) {
    x = jvv.llt().solve(juv.transpose());
  } else {
    fallback = true;
    RVector inv = es.eigenvalues();
    for (Eigen::Index i = 0; i < inv.size(); ++i) {
      inv(i) = inv(i) > kCrbEigenFloor * vmax ? 1.0 / inv(i) : 0.0;
    }
    x = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * juv.transpose();
  }
  RMatrix s = juu - juv * x;
  return {0.5 * (s + s.transpose()), fallback};
}

CrbResult crb(const UraGeometry& g, const ModelCovParams& p, int t_count) {
  const int k = static_cast<int>(p.sources.size());
  if (k < 1) {
    throw DimensionError("crb: need at least one source");
  }
  const RMatrix j = fim(g, p, t_count);
  auto [s, fallback] = schur_complement(j, k);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(s);
  const double smax = es.eigenvalues().maxCoeff();
  const double smin = es.eigenvalues().minCoeff();
  if (!(smin > kCrbEigenFloor * smax)) {
    throw UnidentifiableError("crb: Schur complement is singular (min eigenvalue " +
                              std::to_string(smin) + "); sources are not separately identifiable");
  }
  CrbResult out;
  out.t_count = t_count;
  out.schur_min_eigenvalue = smin;
  out.nuisance_fallback = fallback;
  const RMatrix id = RMatrix::Identity(s.rows(), s.cols());
  Eigen::LLT<RMatrix> llt(s);
  RMatrix c = llt.info() == Eigen::Success
                  ? RMatrix(llt.solve(id))
                  : RMatrix(es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                            es.eigenvectors().transpose());
  out.c = 0.5 * (c + c.transpose());
  return out;
}

}  // namespace idesprit
