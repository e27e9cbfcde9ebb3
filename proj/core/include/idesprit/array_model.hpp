#pragma once

#include <array>
#include <span>
#include <vector>

#include "idesprit/types.hpp"

namespace idesprit {

// Uniform rectangular array with m_x * m_y elements and normalized spacing u = 2*pi*d/lambda.
// Elements are ordered x-major: linear index m = iy * m_x + ix (0-based).
class UraGeometry {
 public:
  UraGeometry(int mx, int my, double u);

  int mx() const { return mx_; }
  int my() const { return my_; }
  double u() const { return u_; }
  int size() const { return mx_ * my_; }
  // Elements per subarray, (m_x - 1)(m_y - 1).
  int subarray_size() const { return (mx_ - 1) * (my_ - 1); }

  int index(int ix, int iy) const { return iy * mx_ + ix; }
  int x_of(int m) const { return m % mx_; }
  int y_of(int m) const { return m / mx_; }

  bool operator==(const UraGeometry&) const = default;

 private:
  int mx_;
  int my_;
  double u_;
};

// Azimuth theta in [0, pi), elevation phi in [0, pi/2), radians.
struct AngPair {
  double theta = 0.0;
  double phi = 0.0;
};

// Throws std::domain_error when the pair is outside the localization range.
void check_range(const AngPair& a);

struct ManifoldDerivatives {
  CVector d_theta;
  CVector d_phi;
};

CVector manifold(const UraGeometry& g, const AngPair& a);
ManifoldDerivatives manifold_derivatives(const UraGeometry& g, const AngPair& a);

// Steering vector without the range check. Used by the simulator, where per-path
// angles may leave the nominal range.
CVector steering(const UraGeometry& g, double theta, double phi);

// [a_1..a_K, da/dtheta_1..K, da/dphi_1..K], M x 3K.
CMatrix response_matrix(const UraGeometry& g, std::span<const AngPair> angles);

// Row-selection operator J_l stored as a gather map (one column index per row).
class SelectionMatrix {
 public:
  SelectionMatrix(int cols, std::vector<int> columns);

  int rows() const { return static_cast<int>(columns_.size()); }
  int cols() const { return cols_; }
  int column(int row) const { return columns_[static_cast<std::size_t>(row)]; }
  const std::vector<int>& columns() const { return columns_; }

  CMatrix apply(const CMatrix& x) const;
  CVector apply(const CVector& x) const;
  CMatrix dense() const;

 private:
  int cols_;
  std::vector<int> columns_;
};

// l = 1: reference subarray, l = 2: shifted one element in x, l = 3: shifted one row in y.
SelectionMatrix selection(const UraGeometry& g, int l);

struct PhaseFactors {
  cdouble f2;
  cdouble f3;
  cdouble df2_dtheta;
  cdouble df2_dphi;
  cdouble df3_dtheta;
  cdouble df3_dphi;
};

PhaseFactors phase_factors(const UraGeometry& g, const AngPair& a);

// Block upper-triangular Phi_{q,1} with A_q = A_1 * Phi_{q,1}; q in {2, 3}.
CMatrix phi_matrix(const UraGeometry& g, std::span<const AngPair> angles, int q);

}  // namespace idesprit
