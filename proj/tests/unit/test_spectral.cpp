#include <doctest.h>

#include <cmath>

#include "idesprit/spectral.hpp"
#include "test_support.hpp"

using namespace idesprit;
using idesprit::testing::median;
using idesprit::testing::nominals;
using idesprit::testing::two_sources;

TEST_CASE("sample covariance of a single unit snapshot") {
  CMatrix x = CMatrix::Zero(4, 1);
  x(0, 0) = 1.0;
  const CovarianceEstimate c = sample_covariance(x);
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  CHECK((c.r_hat - expect).norm() == 0.0);
  CHECK(c.t_count == 1);
  CHECK_THROWS_AS(sample_covariance(CMatrix(4, 0)), DimensionError);
}

TEST_CASE("sample covariance of the reference configuration") {
  const UraGeometry g(10, 10, kPi);
  const SnapshotSet x = generate(g, two_sources(0.2), 500, 1.0, 8);
  const CovarianceEstimate c = sample_covariance(x);
  CHECK((c.r_hat - c.r_hat.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * c.r_hat.norm());
  CHECK(c.r_hat.trace().real() / 100.0 == doctest::Approx(1.4).epsilon(0.05));
  const HermitianEig e = hermitian_eig(c.r_hat);
  CHECK(e.values.minCoeff() >= -1e-10 * e.values.maxCoeff());
  CHECK(e.values.sum() == doctest::Approx(c.r_hat.trace().real()).epsilon(1e-8));
  for (int i = 1; i < e.values.size(); ++i) CHECK(e.values(i) <= e.values(i - 1));
}

TEST_CASE("subspace split on fixed matrices") {
  SUBCASE("identity") {
    const CovarianceEstimate c{CMatrix::Identity(6, 6), 1};
    const SubspaceSplit s = subspace_split(c, 1);
    CHECK((s.sigma_s.array() - 1.0).abs().maxCoeff() < 1e-14);
    CHECK(s.noise_var_hat == doctest::Approx(1.0));
    CHECK((s.e_s.adjoint() * s.e_s - CMatrix::Identity(3, 3)).norm() < 1e-10);
  }
  SUBCASE("diagonal") {
    RVector d(9);
    d << 1, 5, 1, 3, 1, 1, 4, 1, 1;
    const CovarianceEstimate c{d.cast<cdouble>().asDiagonal(), 1};
    const SubspaceSplit s = subspace_split(c, 1);
    CHECK(s.sigma_s(0) == doctest::Approx(5.0));
    CHECK(s.sigma_s(1) == doctest::Approx(4.0));
    CHECK(s.sigma_s(2) == doctest::Approx(3.0));
    CHECK(s.noise_var_hat == doctest::Approx(1.0));
    CHECK(s.eigen_all.size() == 9);
  }
  SUBCASE("dimension error") {
    const CovarianceEstimate c{CMatrix::Identity(6, 6), 1};
    CHECK_THROWS_AS(subspace_split(c, 2), DimensionError);
    CHECK_THROWS_AS(subspace_split(c, 0), DimensionError);
  }
}

TEST_CASE("noise floor estimate of the reference configuration") {
  const UraGeometry g(10, 10, kPi);
  const auto src = two_sources(0.2);
  std::vector<double> est;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SubspaceSplit s =
        subspace_split(sample_covariance(generate(g, src, 500, 1.0, seed)), 2);
    est.push_back(s.noise_var_hat);
    CHECK(s.noise_var_hat >= 0.9);
    CHECK(s.noise_var_hat <= 1.1);
  }
  CHECK(median(est) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("subspace alignment") {
  const UraGeometry g(5, 5, kPi);
  const CMatrix a = response_matrix(g, nominals(two_sources()));
  Eigen::HouseholderQR<CMatrix> qr(a);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(25, 25);
  CHECK(subspace_alignment(q.leftCols(6), a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(subspace_alignment(q.middleCols(6, 6), a) < 1e-20);

  CMatrix deficient = a;
  deficient.col(1) = deficient.col(0);
  CHECK_THROWS_AS(subspace_alignment(q.leftCols(6), deficient), RankDeficientError);
  CHECK_THROWS_AS(subspace_alignment(q.leftCols(5), a), DimensionError);
}

TEST_CASE("subspace split is invariant under unitary re-basing of snapshots") {
  const UraGeometry g(6, 6, kPi);
  const SnapshotSet x = generate(g, two_sources(1.0, 20), 120, 0.1, 4);
  // Right-multiplying by a unitary leaves X X^H unchanged.
  const CMatrix z = CMatrix::Random(120, 120);
  Eigen::HouseholderQR<CMatrix> qr(z);
  const CMatrix u = qr.householderQ() * CMatrix::Identity(120, 120);
  const SubspaceSplit s1 = subspace_split(sample_covariance(x.data), 2);
  const SubspaceSplit s2 = subspace_split(sample_covariance((x.data * u).eval()), 2);
  CHECK(subspace_alignment(s1.e_s, s2.e_s) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s1.noise_var_hat == doctest::Approx(s2.noise_var_hat).epsilon(1e-10));
}

TEST_CASE("alignment improves with array size") {
  const auto src = two_sources(0.2);
  const auto ang = nominals(src);
  const auto median_alignment = [&](int n) {
    const UraGeometry g(n, n, kPi);
    const CMatrix a = response_matrix(g, ang);
    std::vector<double> v;
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      const SubspaceSplit s =
          subspace_split(sample_covariance(generate(g, src, 500, 1.0, seed)), 2);
      v.push_back(subspace_alignment(s.e_s, a));
    }
    return median(v);
  };
  // Below M = 400 the derivative directions sit at the noise floor at this power.
  CHECK(median_alignment(20) > median_alignment(4) + 0.3);
}
