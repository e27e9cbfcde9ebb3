#include <doctest.h>

#include <cmath>
#include <random>

#include "idesprit/dispersion_model.hpp"
#include "idesprit/spectral.hpp"
#include "test_support.hpp"

using namespace idesprit;
using namespace idesprit::testing;

namespace {

DispersedSource reference_source(int k, double power = 1.0) {
  const auto src = two_sources();
  const auto& s = src[static_cast<std::size_t>(k)];
  return {s.nominal, s.sigma_theta, s.sigma_phi, power};
}

DispersedSource random_source(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kPi / 2), sp(0.0, 0.05);
  return {{th(rng), ph(rng)}, sp(rng), sp(rng), 1.0};
}

}  // namespace

TEST_CASE("spread kernel B") {
  const UraGeometry g(3, 3, kPi);
  SUBCASE("zero spread gives all ones") {
    DispersedSource s = reference_source(0);
    s.sigma_theta = s.sigma_phi = 0.0;
    CHECK((b_matrix(g, s).array() - 1.0).abs().maxCoeff() == 0.0);
  }
  SUBCASE("hand-evaluated entry") {
    const DispersedSource s = reference_source(0);
    const RMatrix b = b_matrix(g, s);
    const double st = deg_to_rad(1.0);
    const double c30 = std::cos(deg_to_rad(30.0)), s30 = std::sin(deg_to_rad(30.0));
    const double c10 = std::cos(deg_to_rad(10.0)), s10 = std::sin(deg_to_rad(10.0));
    const double want = std::exp(-(kPi * kPi / 2.0) *
                                 (st * st * c30 * c30 * c10 * c10 + st * st * s30 * s30 * s10 * s10));
    // Antennas (1,1) and (2,1) are linear indices 0 and 1.
    CHECK(b(0, 1) == doctest::Approx(want).epsilon(1e-14));
    CHECK(b(1, 0) == doctest::Approx(want).epsilon(1e-14));
  }
  SUBCASE("properties on random sources") {
    std::mt19937_64 rng(4);
    const UraGeometry h(6, 5, kPi);
    for (int i = 0; i < 20; ++i) {
      const RMatrix b = b_matrix(h, random_source(rng));
      CHECK((b - b.transpose()).norm() == 0.0);
      CHECK((b.diagonal().array() - 1.0).abs().maxCoeff() == 0.0);
      CHECK(b.minCoeff() > 0.0);
      CHECK(b.maxCoeff() <= 1.0);
    }
  }
  SUBCASE("offset values agree with the matrix") {
    const UraGeometry h(4, 3, kPi);
    const DispersedSource s = reference_source(1);
    const RMatrix b = b_matrix(h, s);
    const std::vector<std::array<int, 2>> off{{0, 0}, {1, 0}, {-2, 1}, {3, -2}};
    const RVector v = b_offset_values(h, s, off);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == doctest::Approx(b(h.index(1, 0), h.index(0, 0))));
    CHECK(v(2) == doctest::Approx(b(h.index(0, 1), h.index(2, 0))));
    CHECK(v(3) == doctest::Approx(b(h.index(3, 0), h.index(0, 2))));
  }
}

TEST_CASE("log-derivatives of B match finite differences") {
  const UraGeometry g(5, 4, kPi);
  const DispersedSource s = reference_source(1);
  const BLogDerivatives d = b_log_derivatives(g, s);
  const RMatrix b = b_matrix(g, s);
  const double h = 1e-7;
  const auto fd = [&](auto perturb) {
    DispersedSource p = s, m = s;
    perturb(p, h);
    perturb(m, -h);
    return RMatrix((b_matrix(g, p) - b_matrix(g, m)) / (2 * h));
  };
  const auto rel = [](const RMatrix& a, const RMatrix& e) { return (a - e).norm() / e.norm(); };
  CHECK(rel(b.cwiseProduct(d.d_theta), fd([](auto& x, double e) { x.nominal.theta += e; })) < 1e-6);
  CHECK(rel(b.cwiseProduct(d.d_phi), fd([](auto& x, double e) { x.nominal.phi += e; })) < 1e-6);
  CHECK(rel(b.cwiseProduct(d.d_sigma_theta), fd([](auto& x, double e) { x.sigma_theta += e; })) < 1e-6);
  CHECK(rel(b.cwiseProduct(d.d_sigma_phi), fd([](auto& x, double e) { x.sigma_phi += e; })) < 1e-6);
}

TEST_CASE("Xi matrix") {
  const UraGeometry g(4, 4, kPi);
  SUBCASE("zero spread is the rank-one outer product") {
    DispersedSource s = reference_source(0);
    s.sigma_theta = s.sigma_phi = 0.0;
    const CVector a = manifold(g, s.nominal);
    CHECK(rel_err(xi_matrix(g, s), a * a.adjoint()) < 1e-14);
  }
  SUBCASE("Hadamard form, trace and definiteness") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
      const DispersedSource s = random_source(rng);
      const CVector a = manifold(g, s.nominal);
      const CMatrix had = (a * a.adjoint()).cwiseProduct(b_matrix(g, s).cast<cdouble>());
      const CMatrix xi = xi_matrix(g, s);
      CHECK((xi - had).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(xi.trace() - double(g.size())) < 1e-12);
      CHECK((xi - xi.adjoint()).norm() < 1e-14);
      const RVector ev = hermitian_eig(xi).values;
      CHECK(ev.minCoeff() >= -1e-10 * ev.maxCoeff());
    }
  }
}

TEST_CASE("model covariance") {
  SUBCASE("no sources") {
    const UraGeometry g(3, 3, kPi);
    ModelCovParams p;
    p.noise_var = 2.5;
    CHECK((model_covariance(g, p) - 2.5 * CMatrix::Identity(9, 9)).norm() == 0.0);
  }
  SUBCASE("single point source spectrum") {
    const UraGeometry g(4, 4, kPi);
    ModelCovParams p;
    DispersedSource s = reference_source(0, 0.7);
    s.sigma_theta = s.sigma_phi = 0.0;
    p.sources = {s};
    p.noise_var = 0.3;
    const RVector ev = hermitian_eig(model_covariance(g, p)).values;
    CHECK(ev(0) == doctest::Approx(16 * 0.7 + 0.3).epsilon(1e-12));
    for (int i = 1; i < 16; ++i) CHECK(ev(i) == doctest::Approx(0.3).epsilon(1e-10));
  }
  SUBCASE("agrees with the first-order model for small spreads") {
    const auto gap = [](int n, double spread_deg) {
      const UraGeometry g(n, n, kPi);
      const auto src = two_sources(0.2, 50, spread_deg);
      ModelCovParams p;
      for (const auto& x : src) p.sources.push_back({x.nominal, x.sigma_theta, x.sigma_phi, 0.2});
      p.noise_var = 1.0;
      const CMatrix a = response_matrix(g, nominals(src));
      const double s2 = deg_to_rad(spread_deg) * deg_to_rad(spread_deg);
      RVector lc(6);
      lc << 0.2, 0.2, 0.2 * s2, 0.2 * s2, 0.2 * s2, 0.2 * s2;
      CMatrix taylor = a * lc.cast<cdouble>().asDiagonal() * a.adjoint();
      taylor.diagonal().array() += 1.0;
      return rel_err(taylor, model_covariance(g, p));
    };
    CHECK(gap(4, 1.0) < 0.02);
    CHECK(gap(10, 0.2) < 0.02);
    // Truncation error is second order in the spread.
    CHECK(gap(10, 0.5) / gap(10, 1.0) == doctest::Approx(0.25).epsilon(0.1));
    CHECK(gap(10, 1.0) > gap(6, 1.0));
  }
  SUBCASE("matches Gauss-Hermite quadrature of the exact integral") {
    const int nodes = 24;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 1; i < nodes; ++i) jac(i, i - 1) = jac(i - 1, i) = std::sqrt(double(i));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    const Eigen::VectorXd x = es.eigenvalues();
    const Eigen::VectorXd w = es.eigenvectors().row(0).array().square();
    const UraGeometry g(10, 10, kPi);
    const AngPair c{deg_to_rad(10.0), deg_to_rad(30.0)};
    const double s = deg_to_rad(1.0);
    CMatrix q = CMatrix::Zero(100, 100);
    for (int i = 0; i < nodes; ++i) {
      for (int j = 0; j < nodes; ++j) {
        const CVector v = steering(g, c.theta + s * x(i), c.phi + s * x(j));
        q += w(i) * w(j) * v * v.adjoint();
      }
    }
    ModelCovParams p;
    p.sources = {{c, s, s, 1.0}};
    p.noise_var = 0.0;
    CHECK(rel_err(model_covariance(g, p), q) < 5e-3);
  }
  SUBCASE("matches the simulator's sample covariance") {
    const UraGeometry g(8, 8, kPi);
    const auto src = two_sources(1.0);
    ModelCovParams p;
    p.sources = {reference_source(0, 1.0), reference_source(1, 1.0)};
    p.noise_var = 1.0;
    const CovarianceEstimate c = sample_covariance(generate(g, src, 100000, 1.0, 55));
    CHECK(rel_err(c.r_hat, model_covariance(g, p)) < 0.05);
  }
}
