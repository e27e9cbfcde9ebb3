#include "idesprit/dispersion_model.hpp"

#include <cmath>

namespace idesprit {

namespace {

// Fills an M x M matrix from a table indexed by (dx + mx - 1, dy + my - 1).
template <class F>
RMatrix from_offsets(const UraGeometry& g, F&& value) {
  const int mx = g.mx();
  const int my = g.my();
  const int wx = 2 * mx - 1;
  RMatrix table(wx, 2 * my - 1);
  for (int dy = -(my - 1); dy < my; ++dy) {
    for (int dx = -(mx - 1); dx < mx; ++dx) {
      table(dx + mx - 1, dy + my - 1) = value(static_cast<double>(dx), static_cast<double>(dy));
    }
  }
  const int m = g.size();
  RMatrix out(m, m);
  for (int n = 0; n < m; ++n) {
    const int nx = g.x_of(n);
    const int ny = g.y_of(n);
    for (int r = 0; r < m; ++r) {
      out(r, n) = table(g.x_of(r) - nx + mx - 1, g.y_of(r) - ny + my - 1);
    }
  }
  return out;
}

struct Kernel {
  double c;   // cos theta
  double s;   // sin theta
  double cp;  // cos phi
  double sp;  // sin phi
  double u2;  // u^2
  double vt;  // sigma_theta^2
  double vp;  // sigma_phi^2

  Kernel(const UraGeometry& g, const DispersedSource& src)
      : c(std::cos(src.nominal.theta)),
        s(std::sin(src.nominal.theta)),
        cp(std::cos(src.nominal.phi)),
        sp(std::sin(src.nominal.phi)),
        u2(g.u() * g.u()),
        vt(src.sigma_theta * src.sigma_theta),
        vp(src.sigma_phi * src.sigma_phi) {}

  double along(double dx, double dy) const { return dx * c + dy * s; }
  double across(double dx, double dy) const { return -dx * s + dy * c; }
};

}  // namespace

RVector b_offset_values(const UraGeometry& g, const DispersedSource& src,
                        std::span<const std::array<int, 2>> offsets) {
  const Kernel k(g, src);
  RVector out(static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double p = k.along(offsets[i][0], offsets[i][1]);
    const double q = k.across(offsets[i][0], offsets[i][1]);
    out(static_cast<Eigen::Index>(i)) =
        std::exp(-0.5 * k.u2 * (k.vp * k.cp * k.cp * p * p + k.vt * k.sp * k.sp * q * q));
  }
  return out;
}

RMatrix b_matrix(const UraGeometry& g, const DispersedSource& src) {
  const Kernel k(g, src);
  return from_offsets(g, [&](double dx, double dy) {
    const double p = k.along(dx, dy);
    const double q = k.across(dx, dy);
    return std::exp(-0.5 * k.u2 * (k.vp * k.cp * k.cp * p * p + k.vt * k.sp * k.sp * q * q));
  });
}

BLogDerivatives b_log_derivatives(const UraGeometry& g, const DispersedSource& src) {
  const Kernel k(g, src);
  BLogDerivatives d;
  d.d_theta = from_offsets(g, [&](double dx, double dy) {
    const double p = k.along(dx, dy);
    const double q = k.across(dx, dy);
    return -k.u2 * p * q * (k.vp * k.cp * k.cp - k.vt * k.sp * k.sp);
  });
  d.d_phi = from_offsets(g, [&](double dx, double dy) {
    const double p = k.along(dx, dy);
    const double q = k.across(dx, dy);
    return -k.u2 * k.sp * k.cp * (k.vt * q * q - k.vp * p * p);
  });
  d.d_sigma_theta = from_offsets(g, [&](double dx, double dy) {
    const double q = k.across(dx, dy);
    return -k.u2 * src.sigma_theta * k.sp * k.sp * q * q;
  });
  d.d_sigma_phi = from_offsets(g, [&](double dx, double dy) {
    const double p = k.along(dx, dy);
    return -k.u2 * src.sigma_phi * k.cp * k.cp * p * p;
  });
  return d;
}

CMatrix xi_matrix(const UraGeometry& g, const DispersedSource& s) {
  const CVector a = steering(g, s.nominal.theta, s.nominal.phi);
  const RMatrix b = b_matrix(g, s);
  return a.asDiagonal() * b.cast<cdouble>() * a.conjugate().asDiagonal();
}

CMatrix model_covariance(const UraGeometry& g, const ModelCovParams& p) {
  const int m = g.size();
  CMatrix r = CMatrix::Identity(m, m) * p.noise_var;
  for (const auto& s : p.sources) {
    r += s.power * xi_matrix(g, s);
  }
  return r;
}

}  // namespace idesprit
