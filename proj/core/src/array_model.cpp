#include "idesprit/array_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace idesprit {

UraGeometry::UraGeometry(int mx, int my, double u) : mx_(mx), my_(my), u_(u) {
  if (mx < 2 || my < 2) {
    throw std::invalid_argument("UraGeometry: m_x and m_y must both be >= 2, got " +
                                std::to_string(mx) + "x" + std::to_string(my));
  }
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument("UraGeometry: spacing u must be positive and finite");
  }
}

void check_range(const AngPair& a) {
  if (!std::isfinite(a.theta) || a.theta < 0.0 || a.theta >= kPi) {
    throw std::domain_error("azimuth " + std::to_string(a.theta) + " rad outside [0, pi)");
  }
  if (!std::isfinite(a.phi) || a.phi < 0.0 || a.phi >= kPi / 2.0) {
    throw std::domain_error("elevation " + std::to_string(a.phi) + " rad outside [0, pi/2)");
  }
}

namespace {

// Phase slope along x and y: u*sin(phi)*cos(theta), u*sin(phi)*sin(theta).
struct Slopes {
  double x;
  double y;
};

Slopes slopes(const UraGeometry& g, double theta, double phi) {
  const double s = g.u() * std::sin(phi);
  return {s * std::cos(theta), s * std::sin(theta)};
}

}  // namespace

CVector manifold(const UraGeometry& g, const AngPair& a) {
  check_range(a);
  const Slopes k = slopes(g, a.theta, a.phi);
  CVector out(g.size());
  for (int iy = 0; iy < g.my(); ++iy) {
    for (int ix = 0; ix < g.mx(); ++ix) {
      out(g.index(ix, iy)) = std::polar(1.0, k.x * ix + k.y * iy);
    }
  }
  return out;
}

CVector steering(const UraGeometry& g, double theta, double phi) {
  const Slopes k = slopes(g, theta, phi);
  CVector out(g.size());
  for (int iy = 0; iy < g.my(); ++iy) {
    const cdouble row = std::polar(1.0, k.y * iy);
    for (int ix = 0; ix < g.mx(); ++ix) {
      out(g.index(ix, iy)) = row * std::polar(1.0, k.x * ix);
    }
  }
  return out;
}

ManifoldDerivatives manifold_derivatives(const UraGeometry& g, const AngPair& a) {
  const CVector base = manifold(g, a);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  const cdouble iu(0.0, g.u());
  ManifoldDerivatives d{CVector(g.size()), CVector(g.size())};
  for (int m = 0; m < g.size(); ++m) {
    const double ix = g.x_of(m);
    const double iy = g.y_of(m);
    d.d_theta(m) = iu * sp * (-ix * st + iy * ct) * base(m);
    d.d_phi(m) = iu * cp * (ix * ct + iy * st) * base(m);
  }
  return d;
}

CMatrix response_matrix(const UraGeometry& g, std::span<const AngPair> angles) {
  const int k_count = static_cast<int>(angles.size());
  if (k_count < 1) {
    throw DimensionError("response_matrix: need at least one source");
  }
  if (3 * k_count > g.size()) {
    throw DimensionError("response_matrix: 3K = " + std::to_string(3 * k_count) +
                         " exceeds M = " + std::to_string(g.size()));
  }
  CMatrix a(g.size(), 3 * k_count);
  for (int k = 0; k < k_count; ++k) {
    const auto& ang = angles[static_cast<std::size_t>(k)];
    a.col(k) = manifold(g, ang);
    const ManifoldDerivatives d = manifold_derivatives(g, ang);
    a.col(k_count + k) = d.d_theta;
    a.col(2 * k_count + k) = d.d_phi;
  }
  return a;
}

SelectionMatrix::SelectionMatrix(int cols, std::vector<int> columns)
    : cols_(cols), columns_(std::move(columns)) {
  for (int c : columns_) {
    if (c < 0 || c >= cols_) {
      throw std::out_of_range("SelectionMatrix: column index out of range");
    }
  }
}

CMatrix SelectionMatrix::apply(const CMatrix& x) const {
  if (x.rows() != cols_) {
    throw DimensionError("SelectionMatrix::apply: row count mismatch");
  }
  CMatrix out(rows(), x.cols());
  for (int r = 0; r < rows(); ++r) {
    out.row(r) = x.row(column(r));
  }
  return out;
}

CVector SelectionMatrix::apply(const CVector& x) const {
  if (x.size() != cols_) {
    throw DimensionError("SelectionMatrix::apply: length mismatch");
  }
  CVector out(rows());
  for (int r = 0; r < rows(); ++r) {
    out(r) = x(column(r));
  }
  return out;
}

CMatrix SelectionMatrix::dense() const {
  CMatrix j = CMatrix::Zero(rows(), cols_);
  for (int r = 0; r < rows(); ++r) {
    j(r, column(r)) = 1.0;
  }
  return j;
}

SelectionMatrix selection(const UraGeometry& g, int l) {
  int shift = 0;
  switch (l) {
    case 1: shift = 0; break;
    case 2: shift = 1; break;
    case 3: shift = g.mx(); break;
    default:
      throw std::invalid_argument("selection: subarray index must be 1, 2 or 3, got " +
                                  std::to_string(l));
  }
  const int rows = g.subarray_size();
  std::vector<int> cols(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    cols[static_cast<std::size_t>(r)] = r + r / (g.mx() - 1) + shift;
  }
  return SelectionMatrix(g.size(), std::move(cols));
}

PhaseFactors phase_factors(const UraGeometry& g, const AngPair& a) {
  check_range(a);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  const double u = g.u();
  const cdouble i(0.0, 1.0);
  PhaseFactors f{};
  f.f2 = std::polar(1.0, u * sp * ct);
  f.f3 = std::polar(1.0, u * sp * st);
  f.df2_dtheta = f.f2 * (-i * u * sp * st);
  f.df2_dphi = f.f2 * (i * u * cp * ct);
  f.df3_dtheta = f.f3 * (i * u * sp * ct);
  f.df3_dphi = f.f3 * (i * u * cp * st);
  return f;
}

CMatrix phi_matrix(const UraGeometry& g, std::span<const AngPair> angles, int q) {
  if (q != 2 && q != 3) {
    throw std::invalid_argument("phi_matrix: q must be 2 or 3");
  }
  const int k_count = static_cast<int>(angles.size());
  CMatrix phi = CMatrix::Zero(3 * k_count, 3 * k_count);
  for (int k = 0; k < k_count; ++k) {
    const PhaseFactors f = phase_factors(g, angles[static_cast<std::size_t>(k)]);
    const cdouble diag = q == 2 ? f.f2 : f.f3;
    const cdouble d_theta = q == 2 ? f.df2_dtheta : f.df3_dtheta;
    const cdouble d_phi = q == 2 ? f.df2_dphi : f.df3_dphi;
    for (int l = 0; l < 3; ++l) {
      phi(l * k_count + k, l * k_count + k) = diag;
    }
    phi(k, k_count + k) = d_theta;
    phi(k, 2 * k_count + k) = d_phi;
  }
  return phi;
}

}  // namespace idesprit
