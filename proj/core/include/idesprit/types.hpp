#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace idesprit {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Matrix/vector sizes that do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// TLS eigenvector partition E22 is (numerically) singular.
class SingularPartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Response matrix rebuilt from estimated DOAs lost column rank.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, int first, int second)
      : std::runtime_error(what), first_(first), second_(second) {}
  int first_source() const { return first_; }
  int second_source() const { return second_; }

 private:
  int first_;
  int second_;
};

// Fisher information cannot be inverted: the configuration is (nearly) unidentifiable.
class UnidentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure inside the estimation pipeline, tagged with the stage that raised it.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(std::string stage, const std::string& detail)
      : std::runtime_error(stage + ": " + detail), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace idesprit
