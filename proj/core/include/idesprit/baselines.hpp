#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "idesprit/dispersion_model.hpp"

namespace idesprit {

// Evenly spaced values lo, lo + step, ..., count of them.
class ParamAxis {
 public:
  ParamAxis(double lo, double hi, double step);
  static ParamAxis centered(double center, double half_width, double step);

  int count() const { return count_; }
  double value(int i) const { return lo_ + step_ * i; }
  double lo() const { return lo_; }
  double step() const { return step_; }

 private:
  double lo_;
  double step_;
  int count_;
};

struct Candidate {
  double theta = 0.0;
  double phi = 0.0;
  double sigma_theta = 0.0;
  double sigma_phi = 0.0;
};

struct SearchGrid {
  ParamAxis theta;
  ParamAxis phi;
  ParamAxis sigma_theta;
  ParamAxis sigma_phi;

  std::size_t size() const;
  // Local window around a nominal DOA: +/- doa_half_width at doa_step, spreads on [lo, hi].
  static SearchGrid local(const AngPair& center, double doa_half_width, double doa_step,
                          double spread_lo, double spread_hi, double spread_step);
};

// Direct evaluation of the criteria. The kernel is the normalized source covariance
// Xi = D B D^H of the candidate.
double subspace_objective(const CMatrix& r_hat_inv, const UraGeometry& g, const Candidate& c);
double dispare_objective(const CMatrix& e_n, const UraGeometry& g, const Candidate& c);

struct CometSource {
  Candidate params;
  double power = 1.0;
};
double comet_objective(const CMatrix& r_hat, const UraGeometry& g,
                       std::span<const CometSource> sources, double noise_var);

// Pseudosignal dimension: fewest leading eigenvalues holding `fraction` of the total
// noise-subtracted eigenvalue mass.
int pseudosignal_dimension(const RVector& eigen_desc, double noise_var, double fraction = 0.95);

using Objective = std::function<double(const Candidate&)>;

struct GridResult {
  Candidate best;
  double value = 0.0;
  std::size_t evaluations = 0;
};

// Exhaustive search, first strict minimum wins (theta outermost, sigma_phi innermost).
GridResult grid_search(const Objective& f, const SearchGrid& grid);
std::vector<GridResult> grid_search(const Objective& f, std::span<const SearchGrid> grids);

// tr(B H B) for a symmetric H and any spread kernel B of the geometry. B depends only on
// the element offset and B(d) = B(-d), so the trace collapses to f^T G f over the distinct
// sign-folded offsets, with G accumulated once per H.
class OffsetQuadraticForm {
 public:
  explicit OffsetQuadraticForm(const UraGeometry& g);

  int size() const { return static_cast<int>(offsets_.size()); }
  const std::vector<std::array<int, 2>>& offsets() const { return offsets_; }

  void set_matrix(const RMatrix& h);
  RVector kernel(const DispersedSource& s) const;
  // f^T G f for the kernel f returned by kernel().
  double trace_bhb(const RVector& f) const;
  // ||B||_F^2
  double energy(const RVector& f) const;

 private:
  UraGeometry g_;
  std::vector<std::array<int, 2>> offsets_;  // canonical representatives
  RVector multiplicity_;                     // number of (m, n) pairs per canonical offset
  RMatrix gram_;
};

// Same criteria as subspace_objective / dispare_objective, evaluated through
// OffsetQuadraticForm with the DOA-dependent matrix cached between candidates.
class SubspaceEvaluator {
 public:
  SubspaceEvaluator(const CMatrix& r_hat, const UraGeometry& g);
  double operator()(const Candidate& c);

 private:
  UraGeometry g_;
  CMatrix r_inv_sq_;
  OffsetQuadraticForm form_;
  std::optional<AngPair> cached_;
};

class DispareEvaluator {
 public:
  DispareEvaluator(const CMatrix& r_hat, const UraGeometry& g, double noise_var_hat);
  double operator()(const Candidate& c);
  int pseudosignal_dim() const { return static_cast<int>(e_s_.cols()); }
  const CMatrix& noise_basis() const { return e_n_; }

 private:
  UraGeometry g_;
  CMatrix e_s_;
  CMatrix e_n_;
  OffsetQuadraticForm form_;
  std::optional<AngPair> cached_;
};

}  // namespace idesprit
