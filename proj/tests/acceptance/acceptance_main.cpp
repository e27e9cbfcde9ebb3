// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idesprit/complexity.hpp"
#include "idesprit/crb.hpp"
#include "idesprit/esprit.hpp"
#include "idesprit/experiment.hpp"
#include "idesprit/report.hpp"
#include "idesprit/rng.hpp"
#include "matching_oracle.hpp"
#include "test_support.hpp"

using namespace idesprit;
using namespace idesprit::testing;
namespace fs = std::filesystem;

namespace {

struct Options {
  int trials = 0;  // 0: use the configured count
  unsigned threads = 0;
  fs::path out = "acceptance_out";
  std::set<int> only;
};

struct Outcome {
  bool pass = false;
  std::string summary;
};

class Log {
 public:
  void detail(const std::string& s) { std::printf("    %s\n", s.c_str()); }
  template <class... A>
  void detailf(const char* fmt, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, a...);
    detail(buf);
  }
};

Log logger;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

CMatrix orthonormal(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
}

// ---------------------------------------------------------------------------------------
// Monte Carlo helpers

ExperimentConfig load(const char* name, const Options& opt) {
  ExperimentConfig cfg = load_config(fs::path(IDESPRIT_CONFIG_DIR) / (std::string(name) + ".json"));
  if (opt.trials > 0) cfg.trials = opt.trials;
  return cfg;
}

RmseTable run_and_emit(const ExperimentConfig& cfg, const Options& opt, const std::string& tag) {
  const auto t0 = std::chrono::steady_clock::now();
  RmseTable t = run_experiment(cfg, {opt.threads});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(t, {}, opt.out / tag);
  logger.detailf("%s: %d trials/point, %.1f s, artifacts in %s", cfg.name.c_str(), cfg.trials,
                 secs, (opt.out / tag).string().c_str());
  return t;
}

// Sweep values in order of appearance.
std::vector<double> sweep_values(const RmseTable& t) {
  std::vector<double> v;
  for (const auto& r : t.rows) {
    if (std::find(v.begin(), v.end(), r.sweep_value) == v.end()) v.push_back(r.sweep_value);
  }
  return v;
}

// Median across sources of per-source RMSE at each sweep value.
std::vector<double> median_curve(const RmseTable& t, const std::string& est, ParamClass c) {
  std::vector<double> out;
  for (double x : sweep_values(t)) {
    std::vector<double> per_source;
    for (const auto& r : t.source_rows) {
      if (r.sweep_value == x && r.estimator == est && r.param_class == c) {
        per_source.push_back(r.rmse_deg);
      }
    }
    out.push_back(per_source.empty() ? std::nan("") : median(per_source));
  }
  return out;
}

std::string curve_str(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4g", x);
  return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// (max - min) / mean; 0 for a constant curve, infinity when the mean is 0 but values differ.
double relative_variation(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi == *lo) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x / double(v.size());
  return mean > 0.0 ? (*hi - *lo) / mean : std::numeric_limits<double>::infinity();
}

int failed_trials(const RmseTable& t) {
  int n = 0;
  for (const auto& r : t.rows) n += r.trials_failed;
  return n;
}

// ---------------------------------------------------------------------------------------
// Criteria

Outcome exact_algebra() {
  bool ok = true;
  const auto ang = nominals(two_sources());

  double worst_identity = 0.0;
  for (int n : {4, 10}) {
    const UraGeometry g(n, n, kPi);
    const CMatrix a = response_matrix(g, ang);
    const CMatrix a1 = selection(g, 1).apply(a);
    for (int q : {2, 3}) {
      const CMatrix aq = selection(g, q).apply(a);
      worst_identity =
          std::max(worst_identity, (aq - a1 * phi_matrix(g, ang, q)).cwiseAbs().maxCoeff());
    }
  }
  ok = ok && worst_identity < 1e-10;
  logger.detailf("subarray identity max residual %.3g (limit 1e-10)", worst_identity);

  // Column norms: sqrt(M) for the manifolds; derivative norms against the element sum
  // u^2 sin^2(phi) sum (-x sin(theta) + y cos(theta))^2 (and the cos(phi) analogue).
  double worst_norm = 0.0, worst_deriv = 0.0, r_lo = 1e300, r_hi = 0.0;
  for (int n : {4, 10, 20}) {
    const UraGeometry g(n, n, kPi);
    const CMatrix a = response_matrix(g, ang);
    const double sqrt_m = std::sqrt(double(g.size()));
    for (int k = 0; k < 2; ++k) {
      worst_norm = std::max(worst_norm, std::abs(a.col(k).norm() - sqrt_m));
      const AngPair& p = ang[static_cast<std::size_t>(k)];
      double s2 = 0.0, s3 = 0.0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double dt = kPi * std::sin(p.phi) * (-x * std::sin(p.theta) + y * std::cos(p.theta));
          const double dp = kPi * std::cos(p.phi) * (x * std::cos(p.theta) + y * std::sin(p.theta));
          s2 += dt * dt;
          s3 += dp * dp;
        }
      }
      worst_deriv = std::max({worst_deriv, std::abs(a.col(2 + k).norm() - std::sqrt(s2)) / std::sqrt(s2),
                              std::abs(a.col(4 + k).norm() - std::sqrt(s3)) / std::sqrt(s3)});
      const double scale = std::sqrt(double(g.size()) * g.subarray_size());
      for (double r : {a.col(2 + k).norm() / scale, a.col(4 + k).norm() / scale}) {
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
      }
    }
  }
  ok = ok && worst_norm <= 1e-12 && worst_deriv <= 1e-12 && r_lo > 0.05 && r_hi < 5.0;
  logger.detailf("manifold column norm |r - sqrt(M)| max %.3g; derivative norm rel. err %.3g", worst_norm,
                 worst_deriv);
  logger.detailf("normalised derivative norms r/sqrt(M*Mtilde) within [%.3f, %.3f]", r_lo, r_hi);

  double worst_doa = 0.0;
  for (int n : {4, 10, 12}) {
    const UraGeometry g(n, n, kPi);
    const DoaRecovery d = estimate_doas_from_subspace(orthonormal(response_matrix(g, ang)), g, 2);
    std::vector<AngPair> got = d.doas;
    std::sort(got.begin(), got.end(), [](auto x, auto y) { return x.theta < y.theta; });
    for (int k = 0; k < 2; ++k) {
      worst_doa = std::max({worst_doa, std::abs(got[static_cast<std::size_t>(k)].theta - ang[static_cast<std::size_t>(k)].theta),
                            std::abs(got[static_cast<std::size_t>(k)].phi - ang[static_cast<std::size_t>(k)].phi)});
    }
  }
  ok = ok && worst_doa < 1e-6;
  logger.detailf("noise-free subspace DOA error max %.3g rad (limit 1e-6)", worst_doa);
  return {ok, "identity " + fmt("%.2g", worst_identity) + ", DOA " + fmt("%.2g", worst_doa) + " rad"};
}

double& model_param(ModelCovParams& p, int q) {
  const int k = static_cast<int>(p.sources.size());
  if (q == 5 * k) return p.noise_var;
  auto& s = p.sources[static_cast<std::size_t>(q % k)];
  switch (q / k) {
    case 0: return s.nominal.theta;
    case 1: return s.nominal.phi;
    case 2: return s.sigma_theta;
    case 3: return s.sigma_phi;
    default: return s.power;
  }
}

Outcome derivative_oracles() {
  const UraGeometry g(10, 10, kPi);
  const auto src = two_sources(power_for_snr_db(10.0, 1.0, 1.0));
  const double h = 1e-6;
  double worst_manifold = 0.0;
  for (const auto& s : src) {
    const AngPair a = s.nominal;
    const ManifoldDerivatives d = manifold_derivatives(g, a);
    const CVector ft = (manifold(g, {a.theta + h, a.phi}) - manifold(g, {a.theta - h, a.phi})) / (2 * h);
    const CVector fp = (manifold(g, {a.theta, a.phi + h}) - manifold(g, {a.theta, a.phi - h})) / (2 * h);
    worst_manifold = std::max({worst_manifold, (d.d_theta - ft).norm() / d.d_theta.norm(),
                               (d.d_phi - fp).norm() / d.d_phi.norm()});
  }
  logger.detailf("manifold derivatives: max rel. err %.3g", worst_manifold);

  ModelCovParams p;
  for (const auto& s : src) p.sources.push_back({s.nominal, s.sigma_theta, s.sigma_phi, s.power});
  p.noise_var = 1.0;
  const auto d = covariance_derivatives(g, p);
  const char* names[] = {"theta", "phi", "sigma_theta", "sigma_phi", "power", "noise"};
  std::array<double, 6> family{};
  for (int q = 0; q < 11; ++q) {
    ModelCovParams plus = p, minus = p;
    model_param(plus, q) += h;
    model_param(minus, q) -= h;
    const CMatrix fd = (model_covariance(g, plus) - model_covariance(g, minus)) / (2 * h);
    const double e = rel_err(d[static_cast<std::size_t>(q)], fd);
    const auto f = static_cast<std::size_t>(q == 10 ? 5 : q / 2);
    family[f] = std::max(family[f], e);
  }
  double worst_cov = 0.0;
  std::string per;
  for (int f = 0; f < 6; ++f) {
    worst_cov = std::max(worst_cov, family[static_cast<std::size_t>(f)]);
    per += std::string(f ? ", " : "") + names[f] + " " + fmt("%.2g", family[static_cast<std::size_t>(f)]);
  }
  logger.detail("covariance derivative families: " + per);
  const bool ok = worst_manifold < 1e-4 && worst_cov < 1e-4;
  return {ok, "max rel. err manifold " + fmt("%.2g", worst_manifold) + ", covariance " +
                  fmt("%.2g", worst_cov) + " (limit 1e-4)"};
}

// Rounds to the given number of significant digits.
double round_sig(double x, int digits) {
  const double e = std::floor(std::log10(std::abs(x)));
  const double s = std::pow(10.0, e - digits + 1);
  return std::round(x / s) * s;
}

Outcome complexity_reproduction() {
  const ComplexityTable t = complexity_table(100, 500, 2, 11, 10);
  const double proposed = double(t.row("proposed").count);
  const double dispare = double(t.row("dispare").count);
  const double comet = double(t.row("comet").count);
  const double ratio = proposed / dispare;
  logger.detailf("D1 = %llu, D2 = %llu", (unsigned long long)t.d1, (unsigned long long)t.d2);
  logger.detailf("proposed %.0f, DISPARE %.0f, COMET %.0f, ratio %.3g%%", proposed, dispare, comet,
                 100.0 * ratio);
  // Quoted figures: 1.4641e8, 1.21e4, 6.0e6, 1.21e10, 1.4641e14 at their printed precision.
  const bool ok = t.d1 == 146410000ULL && t.d2 == 12100ULL && round_sig(proposed, 2) == 6.0e6 &&
                  round_sig(dispare, 3) == 1.21e10 && round_sig(comet, 5) == 1.4641e14 &&
                  ratio < 1e-3 && t.row("subspace").count == t.row("dispare").count;
  return {ok, "D1 1.4641e8, D2 1.21e4, ratio " + fmt("%.3g%%", 100.0 * ratio)};
}

Outcome antenna_trend(const RmseTable& t) {
  bool monotone = true;
  for (ParamClass c : {ParamClass::theta, ParamClass::phi}) {
    const auto v = median_curve(t, "proposed", c);
    const bool dec = strictly_decreasing(v);
    monotone = monotone && dec;
    logger.detailf("proposed %-11s median RMSE (deg) vs M: %s  %s", std::string(to_string(c)).c_str(),
                   curve_str(v).c_str(), dec ? "decreasing" : "NOT strictly decreasing");
  }
  double worst = 0.0;
  for (const char* est : {"subspace", "dispare"}) {
    for (ParamClass c : kParamClasses) {
      const auto v = median_curve(t, est, c);
      const double rv = relative_variation(v);
      worst = std::max(worst, rv);
      logger.detailf("%-8s %-11s RMSE (deg) vs M: %s  variation %.1f%%", est,
                     std::string(to_string(c)).c_str(), curve_str(v).c_str(), 100.0 * rv);
    }
  }
  logger.detailf("failed trials: %d", failed_trials(t));
  return {monotone && worst < 0.30, std::string("proposed DOA strictly decreasing: ") +
                                        (monotone ? "yes" : "no") + ", worst baseline variation " +
                                        fmt("%.1f%%", 100.0 * worst) + " (limit 30%)"};
}

Outcome snr_trend(const RmseTable& t) {
  bool ok = true;
  int bad = 0;
  for (ParamClass c : kParamClasses) {
    const auto v = median_curve(t, "proposed", c);
    const bool dec = strictly_decreasing(v);
    ok = ok && dec;
    bad += !dec;
    logger.detailf("proposed %-11s median RMSE (deg) vs SNR: %s  %s",
                   std::string(to_string(c)).c_str(), curve_str(v).c_str(),
                   dec ? "decreasing" : "NOT strictly decreasing");
  }
  return {ok, std::to_string(4 - bad) + "/4 classes strictly decreasing"};
}

Outcome spread_shape(const RmseTable& t) {
  bool ok = true;
  int interior = 0;
  const auto xs = sweep_values(t);
  for (ParamClass c : kParamClasses) {
    const auto v = median_curve(t, "proposed", c);
    const auto it = std::min_element(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(it - v.begin());
    const bool in = idx > 0 && idx + 1 < v.size();
    interior += in;
    ok = ok && in;
    logger.detailf("proposed %-11s median RMSE (deg) vs spread: %s  minimum at %.1f deg%s",
                   std::string(to_string(c)).c_str(), curve_str(v).c_str(), xs[idx],
                   in ? "" : " (endpoint)");
  }
  logger.detailf("failed trials: %d", failed_trials(t));
  return {ok, std::to_string(interior) + "/4 classes with an interior minimum"};
}

Outcome scatterer_flatness(const RmseTable& t, const std::vector<std::string>& estimators) {
  double worst = 0.0;
  std::string worst_name;
  for (const auto& est : estimators) {
    for (ParamClass c : kParamClasses) {
      const auto v = median_curve(t, est, c);
      const double rv = relative_variation(v);
      if (rv >= worst) {
        worst = rv;
        worst_name = est + "/" + std::string(to_string(c));
      }
      logger.detailf("%-8s %-11s RMSE (deg) vs N: %s  variation %.1f%%", est.c_str(),
                     std::string(to_string(c)).c_str(), curve_str(v).c_str(), 100.0 * rv);
    }
  }
  return {worst < 0.20, "worst variation " + fmt("%.1f%%", 100.0 * worst) + " (" + worst_name +
                            ", limit 20%)"};
}

std::vector<double> alignment_curve(double power, int seeds) {
  const auto src = two_sources(power);
  const auto ang = nominals(src);
  std::vector<double> med;
  for (int n : {4, 8, 12, 20}) {
    const UraGeometry g(n, n, kPi);
    const CMatrix a = response_matrix(g, ang);
    std::vector<double> v;
    for (int s = 0; s < seeds; ++s) {
      const SnapshotSet x = generate(g, src, 500, 1.0, derive_key(8, {std::uint64_t(n), std::uint64_t(s)}));
      v.push_back(subspace_alignment(subspace_split(sample_covariance(x), 2).e_s, a));
    }
    med.push_back(median(v));
  }
  return med;
}

Outcome alignment_trend(const Options& opt) {
  const int seeds = opt.trials > 0 ? std::min(opt.trials, 50) : 50;
  const std::vector<double> med = alignment_curve(0.2, seeds);
  bool ok = true;
  for (std::size_t i = 1; i < med.size(); ++i) ok = ok && med[i] >= med[i - 1];
  logger.detailf("S_k = 0.2, median alignment over %d seeds, M = 16 64 144 400: %s", seeds,
                 curve_str(med).c_str());
  const std::vector<double> ref = alignment_curve(power_for_snr_db(10.0, 1.0, 1.0), seeds);
  logger.detailf("reference, S_k = 10 (10 dB by the sweep formula): %s", curve_str(ref).c_str());
  return {ok, "alignment " + curve_str(med) + " at S_k = 0.2"};
}

Outcome crb_validity(const std::vector<const RmseTable*>& tables) {
  int total = 0, below = 0;
  for (const RmseTable* t : tables) {
    for (const auto& c : t->crb_rows) {
      for (const auto& r : t->source_rows) {
        if (r.estimator == "proposed" && r.sweep_value == c.sweep_value &&
            r.param_class == c.param_class && r.source_index == c.source_index) {
          ++total;
          if (c.crb_sqrt_deg <= r.rmse_deg) {
            ++below;
          } else {
            logger.detailf("bound above RMSE at %s=%g %s source %d: %.4g > %.4g", c.sweep_axis.c_str(),
                           c.sweep_value, std::string(to_string(c.param_class)).c_str(), c.source_index,
                           c.crb_sqrt_deg, r.rmse_deg);
          }
        }
      }
    }
    for (const auto& n : t->notes) logger.detail(n);
  }
  const double frac = total > 0 ? double(below) / total : 0.0;
  logger.detailf("sqrt(CRB) <= RMSE at %d of %d (point, class, source) entries", below, total);

  // Structure of C at each M of the antenna sweep.
  bool structure = true;
  const auto src = two_sources(power_for_snr_db(10.0, 1.0, 1.0));
  ModelCovParams p;
  for (const auto& s : src) p.sources.push_back({s.nominal, s.sigma_theta, s.sigma_phi, s.power});
  p.noise_var = 1.0;
  double worst_sym = 0.0, worst_scale = 0.0, min_eig = 1e300;
  for (int n : {4, 8, 10, 12}) {
    const UraGeometry g(n, n, kPi);
    const CrbResult c1 = crb(g, p, 500), c2 = crb(g, p, 1000);
    const double scale = c1.c.cwiseAbs().maxCoeff();
    worst_sym = std::max(worst_sym, (c1.c - c1.c.transpose()).cwiseAbs().maxCoeff() / scale);
    worst_scale = std::max(worst_scale, (c2.c - 0.5 * c1.c).cwiseAbs().maxCoeff() / scale);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(c1.c);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  structure = worst_sym < 1e-10 && worst_scale < 1e-8 && min_eig > 0.0;
  logger.detailf("C symmetry %.2g, 1/T scaling deviation %.2g, min eigenvalue %.3g", worst_sym,
                 worst_scale, min_eig);
  return {frac >= 0.95 && structure, "bound holds at " + fmt("%.1f%%", 100.0 * frac) +
                                         " of entries, symmetric PD, exact 1/T"};
}

Outcome matching_correctness() {
  std::mt19937_64 rng(20140410);
  const UraGeometry g(10, 10, kPi);
  int ok = 0, optimal = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const int k = 1 + i % 3;
    const SyntheticPsi s = synthetic_psi(g, random_angles(g, k, rng), rng);
    const PairingCheck c = check_pairing(s, match_eigenvalues(s.psi));
    ok += c.recovered;
    optimal += c.algorithm_cost <= c.brute_cost + 1e-10;
  }
  logger.detailf("ground-truth pairing recovered %d/%d, brute-force optimal %d/%d", ok, n, optimal, n);
  return {ok == n && optimal == n, std::to_string(ok) + "/" + std::to_string(n) + " pairings recovered"};
}

Outcome determinism(const Options& opt) {
  ExperimentConfig cfg = load("smoke", Options{});
  const RmseTable a = run_experiment(cfg, {1});
  const RmseTable b = run_experiment(cfg, {4});
  const RmseTable c = run_experiment(cfg, {1});
  const auto da = opt.out / "determinism_a", db = opt.out / "determinism_b";
  emit(a, {}, da);
  emit(b, {}, db);
  bool ok = true;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(da)) {
    if (entry.path().extension() != ".csv") continue;
    std::ifstream fa(entry.path(), std::ios::binary), fb(db / entry.path().filename(), std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    ok = ok && sa.str() == sb.str() && !sa.str().empty();
    ++compared;
  }
  ok = ok && rmse_csv(a) == rmse_csv(c) && crb_csv(a) == crb_csv(c);
  logger.detailf("%d CSV files byte-identical across 1 and 4 threads; repeat run identical", compared);
  return {ok && compared >= 3, std::to_string(compared) + " CSVs identical across thread counts"};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Acceptance criteria"};
  app.add_option("--trials", opt.trials, "Override Monte Carlo trial counts (development only)");
  app.add_option("--threads", opt.threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--out", opt.out, "Directory for experiment artifacts");
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criterion numbers")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  opt.only = {only.begin(), only.end()};
  fs::create_directories(opt.out);

  const auto want = [&](int n) { return opt.only.empty() || opt.only.count(n) > 0; };
  std::map<int, std::pair<std::string, Outcome>> results;
  const auto record = [&](int n, const std::string& name, const std::function<Outcome()>& f) {
    if (!want(n)) return;
    std::printf("[C%d] %s\n", n, name.c_str());
    std::fflush(stdout);
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.summary += fmt(" [%.1f s]", secs);
    std::printf("%s C%d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.summary.c_str());
    std::fflush(stdout);
    results[n] = {name, o};
  };

  record(1, "exact algebra", exact_algebra);
  record(2, "derivative oracles", derivative_oracles);
  record(3, "complexity reproduction", complexity_reproduction);

  std::optional<RmseTable> antennas, snr;
  record(4, "RMSE vs antennas trend", [&] {
    antennas = run_and_emit(load("antennas", opt), opt, "antennas");
    return antenna_trend(*antennas);
  });
  record(5, "RMSE vs SNR trend", [&] {
    ExperimentConfig cfg = load("snr", opt);
    cfg.estimators = {"proposed"};
    snr = run_and_emit(cfg, opt, "snr");
    return snr_trend(*snr);
  });
  record(6, "RMSE vs spread shape", [&] {
    return spread_shape(run_and_emit(load("spread", opt), opt, "spread"));
  });
  record(7, "RMSE vs scatterers flatness", [&] {
    ExperimentConfig cfg = load("scatterers", opt);
    if (opt.trials == 0) cfg.trials = 120;
    return scatterer_flatness(run_and_emit(cfg, opt, "scatterers"), cfg.estimators);
  });
  record(8, "subspace alignment vs M", [&] { return alignment_trend(opt); });
  record(9, "CRB validity", [&] {
    if (!antennas) antennas = run_experiment(load("antennas", opt), {opt.threads});
    if (!snr) {
      ExperimentConfig cfg = load("snr", opt);
      cfg.estimators = {"proposed"};
      snr = run_experiment(cfg, {opt.threads});
    }
    return crb_validity({&*antennas, &*snr});
  });
  record(10, "matching correctness", matching_correctness);
  record(11, "determinism", [&] { return determinism(opt); });

  int failed = 0;
  std::printf("\nSummary\n");
  for (const auto& [n, r] : results) {
    std::printf("%s C%d %s\n", r.second.pass ? "PASS" : "FAIL", n, r.first.c_str());
    failed += !r.second.pass;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  std::ofstream report(opt.out / "report.txt");
  for (const auto& [n, r] : results) {
    report << (r.second.pass ? "PASS" : "FAIL") << " C" << n << " " << r.first << ": " << r.second.summary
           << "\n";
  }
  return failed == 0 ? 0 : 1;
}
