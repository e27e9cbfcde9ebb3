#include <benchmark/benchmark.h>

#include <vector>

#include "idesprit/baselines.hpp"
#include "idesprit/crb.hpp"
#include "idesprit/esprit.hpp"
#include "idesprit/source_sim.hpp"
#include "idesprit/spectral.hpp"

using namespace idesprit;

namespace {

std::vector<SourceParams> reference_sources() {
  std::vector<SourceParams> s(2);
  s[0].nominal = {deg_to_rad(10.0), deg_to_rad(30.0)};
  s[1].nominal = {deg_to_rad(50.0), deg_to_rad(40.0)};
  for (auto& x : s) {
    x.sigma_theta = x.sigma_phi = deg_to_rad(1.0);
    x.power = 0.2;
    x.n_paths = 50;
  }
  return s;
}

ModelCovParams reference_model() {
  ModelCovParams p;
  for (const auto& s : reference_sources()) p.sources.push_back({s.nominal, s.sigma_theta, s.sigma_phi, s.power});
  p.noise_var = 1.0;
  return p;
}

Candidate truth(int k) {
  const auto s = reference_sources()[k];
  return {s.nominal.theta, s.nominal.phi, s.sigma_theta, s.sigma_phi};
}

}  // namespace

static void BM_Generate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const UraGeometry g(n, n, kPi);
  const auto src = reference_sources();
  for (auto _ : state) benchmark::DoNotOptimize(generate(g, src, 500, 1.0, 1));
}
BENCHMARK(BM_Generate)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SampleCovariance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SnapshotSet x = generate(UraGeometry(n, n, kPi), reference_sources(), 500, 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_covariance(x));
}
BENCHMARK(BM_SampleCovariance)->Arg(4)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_Estimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const UraGeometry g(n, n, kPi);
  const CovarianceEstimate c = sample_covariance(generate(g, reference_sources(), 500, 1.0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(c, g, 2));
}
BENCHMARK(BM_Estimate)->Arg(4)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_SubspaceEvaluator(benchmark::State& state) {
  const UraGeometry g(10, 10, kPi);
  const CovarianceEstimate c = sample_covariance(generate(g, reference_sources(), 500, 1.0, 1));
  SubspaceEvaluator f(c.r_hat, g);
  Candidate x = truth(0);
  for (auto _ : state) {
    x.sigma_phi += 1e-9;
    benchmark::DoNotOptimize(f(x));
  }
}
BENCHMARK(BM_SubspaceEvaluator)->Unit(benchmark::kMicrosecond);

static void BM_DispareEvaluator(benchmark::State& state) {
  const UraGeometry g(10, 10, kPi);
  const CovarianceEstimate c = sample_covariance(generate(g, reference_sources(), 500, 1.0, 1));
  DispareEvaluator f(c.r_hat, g, subspace_split(c, 2).noise_var_hat);
  Candidate x = truth(0);
  for (auto _ : state) {
    x.sigma_phi += 1e-9;
    benchmark::DoNotOptimize(f(x));
  }
}
BENCHMARK(BM_DispareEvaluator)->Unit(benchmark::kMicrosecond);

static void BM_Crb(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const UraGeometry g(n, n, kPi);
  const ModelCovParams p = reference_model();
  for (auto _ : state) benchmark::DoNotOptimize(crb(g, p, 500));
}
BENCHMARK(BM_Crb)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
