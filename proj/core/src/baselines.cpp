#include "idesprit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "idesprit/spectral.hpp"

namespace idesprit {

ParamAxis::ParamAxis(double lo, double hi, double step) : lo_(lo), step_(step) {
  if (!(step > 0.0) || hi < lo) {
    throw std::invalid_argument("ParamAxis: need step > 0 and hi >= lo");
  }
  count_ = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
}

ParamAxis ParamAxis::centered(double center, double half_width, double step) {
  return ParamAxis(center - half_width, center + half_width, step);
}

std::size_t SearchGrid::size() const {
  return static_cast<std::size_t>(theta.count()) * static_cast<std::size_t>(phi.count()) *
         static_cast<std::size_t>(sigma_theta.count()) *
         static_cast<std::size_t>(sigma_phi.count());
}

SearchGrid SearchGrid::local(const AngPair& center, double doa_half_width, double doa_step,
                             double spread_lo, double spread_hi, double spread_step) {
  return {ParamAxis::centered(center.theta, doa_half_width, doa_step),
          ParamAxis::centered(center.phi, doa_half_width, doa_step),
          ParamAxis(spread_lo, spread_hi, spread_step), ParamAxis(spread_lo, spread_hi, spread_step)};
}

namespace {

DispersedSource as_source(const Candidate& c, double power = 1.0) {
  return {{c.theta, c.phi}, c.sigma_theta, c.sigma_phi, power};
}

}  // namespace

double subspace_objective(const CMatrix& r_hat_inv, const UraGeometry& g, const Candidate& c) {
  return (r_hat_inv * xi_matrix(g, as_source(c))).squaredNorm();
}

double dispare_objective(const CMatrix& e_n, const UraGeometry& g, const Candidate& c) {
  if (e_n.cols() == 0) return 0.0;
  return (e_n.adjoint() * xi_matrix(g, as_source(c))).squaredNorm();
}

double comet_objective(const CMatrix& r_hat, const UraGeometry& g,
                       std::span<const CometSource> sources, double noise_var) {
  CMatrix diff = -r_hat;
  diff.diagonal().array() += noise_var;
  for (const auto& s : sources) {
    diff += s.power * xi_matrix(g, as_source(s.params));
  }
  // tr(X^2) = ||X||_F^2 for Hermitian X.
  return diff.squaredNorm();
}

int pseudosignal_dimension(const RVector& eigen_desc, double noise_var, double fraction) {
  const RVector excess = (eigen_desc.array() - noise_var).max(0.0);
  const double total = excess.sum();
  if (!(total > 0.0)) return 0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < excess.size(); ++i) {
    acc += excess(i);
    if (acc >= fraction * total) return static_cast<int>(i + 1);
  }
  return static_cast<int>(excess.size());
}

GridResult grid_search(const Objective& f, const SearchGrid& grid) {
  GridResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid.theta.count(); ++a) {
    for (int b = 0; b < grid.phi.count(); ++b) {
      for (int c = 0; c < grid.sigma_theta.count(); ++c) {
        for (int d = 0; d < grid.sigma_phi.count(); ++d) {
          const Candidate cand{grid.theta.value(a), grid.phi.value(b), grid.sigma_theta.value(c),
                               grid.sigma_phi.value(d)};
          const double v = f(cand);
          ++out.evaluations;
          if (v < out.value) {
            out.value = v;
            out.best = cand;
          }
        }
      }
    }
  }
  return out;
}

std::vector<GridResult> grid_search(const Objective& f, std::span<const SearchGrid> grids) {
  std::vector<GridResult> out;
  out.reserve(grids.size());
  for (const auto& grid : grids) {
    out.push_back(grid_search(f, grid));
  }
  return out;
}

namespace {

bool same_doa(const std::optional<AngPair>& cached, const Candidate& c) {
  return cached && cached->theta == c.theta && cached->phi == c.phi;
}

}  // namespace

OffsetQuadraticForm::OffsetQuadraticForm(const UraGeometry& g) : g_(g) {
  const int mx = g.mx();
  const int my = g.my();
  const int wx = 2 * mx - 1;
  // Full offset grid index -> canonical index; canonical means dy > 0, or dy == 0 and dx >= 0.
  std::vector<int> canon(static_cast<std::size_t>(wx * (2 * my - 1)), -1);
  auto slot = [&](int dx, int dy) { return static_cast<std::size_t>((dy + my - 1) * wx + dx + mx - 1); };
  for (int dy = 0; dy < my; ++dy) {
    for (int dx = -(mx - 1); dx < mx; ++dx) {
      if (dy == 0 && dx < 0) continue;
      const int id = static_cast<int>(offsets_.size());
      offsets_.push_back({dx, dy});
      canon[slot(dx, dy)] = id;
      canon[slot(-dx, -dy)] = id;
    }
  }
  const int m = g.size();
  multiplicity_ = RVector::Zero(size());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      multiplicity_(canon[slot(g.x_of(a) - g.x_of(b), g.y_of(a) - g.y_of(b))]) += 1.0;
    }
  }
  gram_ = RMatrix::Zero(size(), size());
}

void OffsetQuadraticForm::set_matrix(const RMatrix& h) {
  const int m = g_.size();
  if (h.rows() != m || h.cols() != m) {
    throw DimensionError("OffsetQuadraticForm: matrix does not match geometry");
  }
  // tr(B H B) = sum_{d1,d2} B(d1) B(d2) sum_a H(a - d1, a - d2). With n = a - d1 and
  // l = n + (d1 - d2), the inner sum runs over a rectangle of n along one diagonal
  // of H, so it is read off a summed-area table of that diagonal.
  const int mx = g_.mx();
  const int my = g_.my();
  const int wx = 2 * mx - 1;
  const int px = mx + 1;
  const int tab = px * (my + 1);
  std::vector<double> prefix(static_cast<std::size_t>(wx * (2 * my - 1) * tab), 0.0);
  auto table = [&](int ex, int ey) {
    return prefix.data() + static_cast<std::size_t>(((ey + my - 1) * wx + ex + mx - 1) * tab);
  };
  for (int ey = -(my - 1); ey < my; ++ey) {
    for (int ex = -(mx - 1); ex < mx; ++ex) {
      double* t = table(ex, ey);
      for (int ny = 0; ny < my; ++ny) {
        for (int nx = 0; nx < mx; ++nx) {
          const int lx = nx + ex;
          const int ly = ny + ey;
          const double v = (lx >= 0 && lx < mx && ly >= 0 && ly < my)
                               ? h(g_.index(nx, ny), g_.index(lx, ly))
                               : 0.0;
          t[(ny + 1) * px + nx + 1] =
              v + t[ny * px + nx + 1] + t[(ny + 1) * px + nx] - t[ny * px + nx];
        }
      }
    }
  }
  auto full = [&](int d1x, int d1y, int d2x, int d2y) {
    const int ex = d1x - d2x;
    const int ey = d1y - d2y;
    if (ex <= -mx || ex >= mx || ey <= -my || ey >= my) return 0.0;
    const int x0 = std::max({0, -d1x, -ex});
    const int x1 = std::min({mx, mx - d1x, mx - ex});
    const int y0 = std::max({0, -d1y, -ey});
    const int y1 = std::min({my, my - d1y, my - ey});
    if (x0 >= x1 || y0 >= y1) return 0.0;
    const double* t = table(ex, ey);
    return t[y1 * px + x1] - t[y0 * px + x1] - t[y1 * px + x0] + t[y0 * px + x0];
  };
  const int c = size();
  for (int i = 0; i < c; ++i) {
    const auto [ax, ay] = offsets_[static_cast<std::size_t>(i)];
    const int si = (ax == 0 && ay == 0) ? 1 : 2;
    for (int j = i; j < c; ++j) {
      const auto [bx, by] = offsets_[static_cast<std::size_t>(j)];
      const int sj = (bx == 0 && by == 0) ? 1 : 2;
      double v = 0.0;
      for (int p = 0; p < si; ++p) {
        const int s1 = p == 0 ? 1 : -1;
        for (int q = 0; q < sj; ++q) {
          const int s2 = q == 0 ? 1 : -1;
          v += full(s1 * ax, s1 * ay, s2 * bx, s2 * by);
        }
      }
      gram_(i, j) = v;
      gram_(j, i) = v;
    }
  }
}

RVector OffsetQuadraticForm::kernel(const DispersedSource& s) const {
  return b_offset_values(g_, s, offsets_);
}

double OffsetQuadraticForm::trace_bhb(const RVector& f) const {
  return f.dot(gram_ * f);
}

double OffsetQuadraticForm::energy(const RVector& f) const {
  return multiplicity_.dot(f.cwiseAbs2());
}

SubspaceEvaluator::SubspaceEvaluator(const CMatrix& r_hat, const UraGeometry& g) : g_(g), form_(g) {
  if (r_hat.rows() != g.size()) {
    throw DimensionError("SubspaceEvaluator: covariance does not match geometry");
  }
  Eigen::LLT<CMatrix> llt(r_hat);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("SubspaceEvaluator: sample covariance is not positive definite");
  }
  const CMatrix r_inv = llt.solve(CMatrix::Identity(g.size(), g.size()));
  r_inv_sq_ = r_inv * r_inv;
}

double SubspaceEvaluator::operator()(const Candidate& c) {
  // ||R^-1 D B D^H||^2 = tr(B Re(D^H R^-2 D) B): the imaginary part is antisymmetric
  // and cancels against the symmetric B.
  if (!same_doa(cached_, c)) {
    const CVector a = steering(g_, c.theta, c.phi);
    const RMatrix h = (a.conjugate().asDiagonal() * r_inv_sq_ * a.asDiagonal()).real();
    form_.set_matrix(0.5 * (h + h.transpose()));
    cached_ = AngPair{c.theta, c.phi};
  }
  return form_.trace_bhb(form_.kernel(as_source(c)));
}

DispareEvaluator::DispareEvaluator(const CMatrix& r_hat, const UraGeometry& g, double noise_var_hat)
    : g_(g), form_(g) {
  if (r_hat.rows() != g.size()) {
    throw DimensionError("DispareEvaluator: covariance does not match geometry");
  }
  const HermitianEig eig = hermitian_eig(r_hat);
  const int d = pseudosignal_dimension(eig.values, noise_var_hat);
  e_s_ = eig.vectors.leftCols(d);
  e_n_ = eig.vectors.rightCols(g.size() - d);
}

double DispareEvaluator::operator()(const Candidate& c) {
  // ||E_n^H Xi||^2 = ||B||^2 - ||E_s^H D B||^2 because [E_s E_n] and D are unitary, and
  // ||E_s^H D B||^2 = tr(B Re(D^H E_s E_s^H D) B).
  if (!same_doa(cached_, c)) {
    const CVector a = steering(g_, c.theta, c.phi);
    const CMatrix f = e_s_.adjoint() * a.asDiagonal();
    form_.set_matrix((f.adjoint() * f).real());
    cached_ = AngPair{c.theta, c.phi};
  }
  const RVector k = form_.kernel(as_source(c));
  return std::max(0.0, form_.energy(k) - form_.trace_bhb(k));
}

}  // namespace idesprit
