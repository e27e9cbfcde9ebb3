#include "idesprit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "idesprit/baselines.hpp"
#include "idesprit/crb.hpp"
#include "idesprit/esprit.hpp"
#include "idesprit/rng.hpp"
#include "idesprit/spectral.hpp"

namespace idesprit {

std::string_view to_string(ParamClass c) {
  switch (c) {
    case ParamClass::theta: return "theta";
    case ParamClass::phi: return "phi";
    case ParamClass::sigma_theta: return "sigma_theta";
    case ParamClass::sigma_phi: return "sigma_phi";
  }
  return "?";
}

ParamClass param_class_from(std::string_view name) {
  for (const auto c : kParamClasses) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown parameter class '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

std::vector<double> degrees_list(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(deg_to_rad(v.get<double>()));
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  const json j = json::parse(json_text);
  reject_unknown(j,
                 {"name", "geometry", "u", "sources", "snr_db", "spread_deg", "k", "paths",
                  "snapshots", "trials", "seed", "noise_var", "estimators", "crb",
                  "baseline_grid"},
                 "config");
  ExperimentConfig cfg;
  cfg.name = j.value("name", cfg.name);
  if (j.contains("geometry")) {
    cfg.geometries.clear();
    for (const auto& g : j.at("geometry")) {
      cfg.geometries.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
    }
  }
  cfg.u = j.value("u", cfg.u);
  for (const auto& s : j.at("sources")) {
    reject_unknown(s,
                   {"theta_deg", "phi_deg", "sigma_theta_deg", "sigma_phi_deg", "sigma_gamma_sq",
                    "power"},
                   "source");
    SourceParams p;
    p.nominal = {deg_to_rad(s.at("theta_deg").get<double>()),
                 deg_to_rad(s.at("phi_deg").get<double>())};
    p.sigma_theta = deg_to_rad(s.value("sigma_theta_deg", 0.0));
    p.sigma_phi = deg_to_rad(s.value("sigma_phi_deg", 0.0));
    p.sigma_gamma_sq = s.value("sigma_gamma_sq", 1.0);
    p.power = s.value("power", 1.0);
    cfg.sources.push_back(p);
  }
  if (j.contains("snr_db")) cfg.snr_db = j.at("snr_db").get<std::vector<double>>();
  if (j.contains("spread_deg")) cfg.spreads = degrees_list(j.at("spread_deg"));
  if (j.contains("k")) cfg.k_values = j.at("k").get<std::vector<int>>();
  if (j.contains("paths")) cfg.paths = j.at("paths").get<std::vector<int>>();
  cfg.t_count = j.value("snapshots", cfg.t_count);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.noise_var = j.value("noise_var", cfg.noise_var);
  if (j.contains("estimators")) cfg.estimators = j.at("estimators").get<std::vector<std::string>>();
  cfg.crb = j.value("crb", cfg.crb);
  if (j.contains("baseline_grid")) {
    const json& b = j.at("baseline_grid");
    reject_unknown(b,
                   {"doa_half_width_deg", "doa_step_deg", "spread_lo_deg", "spread_hi_deg",
                    "spread_step_deg"},
                   "baseline_grid");
    auto rad = [&](const char* key, double fallback) {
      return b.contains(key) ? deg_to_rad(b.at(key).get<double>()) : fallback;
    };
    cfg.grid.doa_half_width = rad("doa_half_width_deg", cfg.grid.doa_half_width);
    cfg.grid.doa_step = rad("doa_step_deg", cfg.grid.doa_step);
    cfg.grid.spread_lo = rad("spread_lo_deg", cfg.grid.spread_lo);
    cfg.grid.spread_hi = rad("spread_hi_deg", cfg.grid.spread_hi);
    cfg.grid.spread_step = rad("spread_step_deg", cfg.grid.spread_step);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Sweep expand(const ExperimentConfig& cfg) {
  if (cfg.sources.empty()) throw std::invalid_argument("config: no sources");
  if (cfg.geometries.empty() || cfg.paths.empty()) {
    throw std::invalid_argument("config: geometry and paths must be non-empty");
  }
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.t_count < 1) throw std::invalid_argument("config: snapshots must be >= 1");
  for (const auto& e : cfg.estimators) {
    if (e != "proposed" && e != "subspace" && e != "dispare") {
      throw std::invalid_argument("config: unknown estimator '" + e + "'");
    }
  }
  struct Axis {
    const char* name;
    std::size_t size;
  };
  const std::array<Axis, 5> axes{{{"M", cfg.geometries.size()},
                                  {"snr_db", cfg.snr_db.size()},
                                  {"spread_deg", cfg.spreads.size()},
                                  {"K", cfg.k_values.size()},
                                  {"paths", cfg.paths.size()}}};
  Sweep sweep{"none", {}};
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.size > 1) {
      if (sweep.axis != "none") {
        throw std::invalid_argument("config: more than one sweep axis (" + sweep.axis + ", " +
                                    a.name + ")");
      }
      sweep.axis = a.name;
      n = a.size;
    }
  }
  auto pick = [&](const auto& list, std::size_t i) { return list.size() > 1 ? list[i] : list[0]; };
  for (std::size_t i = 0; i < n; ++i) {
    const auto dims = pick(cfg.geometries, i);
    SweepPoint pt{0.0, UraGeometry(dims[0], dims[1], cfg.u), {}};
    const int k = cfg.k_values.empty() ? static_cast<int>(cfg.sources.size())
                                       : pick(cfg.k_values, i);
    if (k < 1 || k > static_cast<int>(cfg.sources.size())) {
      throw std::invalid_argument("config: K=" + std::to_string(k) + " exceeds the source list");
    }
    const int paths = pick(cfg.paths, i);
    for (int s = 0; s < k; ++s) {
      SourceParams p = cfg.sources[static_cast<std::size_t>(s)];
      p.n_paths = paths;
      if (!cfg.snr_db.empty()) {
        p.power = power_for_snr_db(pick(cfg.snr_db, i), p.sigma_gamma_sq, cfg.noise_var);
      }
      if (!cfg.spreads.empty()) p.sigma_theta = p.sigma_phi = pick(cfg.spreads, i);
      validate(p);
      pt.sources.push_back(p);
    }
    if (sweep.axis == "M") pt.value = pt.geometry.size();
    if (sweep.axis == "snr_db") pt.value = cfg.snr_db[i];
    if (sweep.axis == "spread_deg") pt.value = rad_to_deg(cfg.spreads[i]);
    if (sweep.axis == "K") pt.value = k;
    if (sweep.axis == "paths") pt.value = paths;
    sweep.points.push_back(std::move(pt));
  }
  return sweep;
}

std::vector<int> hungarian(const RMatrix& cost) {
  // Shortest augmenting path formulation with row/column potentials, 1-based internally.
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw std::invalid_argument("hungarian: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pu(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> pv(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(m + 1), 0);
  std::vector<int> way(static_cast<std::size_t>(m + 1), 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (used[uj]) continue;
        const double cur = cost(i0 - 1, j - 1) - pu[static_cast<std::size_t>(i0)] - pv[uj];
        if (cur < minv[uj]) {
          minv[uj] = cur;
          way[uj] = j0;
        }
        if (minv[uj] < delta) {
          delta = minv[uj];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (used[uj]) {
          pu[static_cast<std::size_t>(match[uj])] += delta;
          pv[uj] -= delta;
        } else {
          minv[uj] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (match[static_cast<std::size_t>(j)] != 0) {
      out[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
  }
  return out;
}

namespace {

using Errors = std::vector<std::array<double, 4>>;  // per source, degrees

struct EstimatorOutcome {
  bool ok = false;
  Errors errors;
};

struct TrialOutcome {
  std::vector<EstimatorOutcome> by_estimator;
  double grouping_confidence = std::numeric_limits<double>::quiet_NaN();
  int doa_clamps = 0;
  int spread_floors = 0;
  int dispare_dim = -1;
  std::size_t elevation_clamps = 0;
};

std::array<double, 4> error_deg(const SourceParams& truth, double th, double ph, double st,
                                double sp) {
  return {rad_to_deg(th - truth.nominal.theta), rad_to_deg(ph - truth.nominal.phi),
          rad_to_deg(st - truth.sigma_theta), rad_to_deg(sp - truth.sigma_phi)};
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const SweepPoint& pt, std::uint64_t seed) {
  const int k = static_cast<int>(pt.sources.size());
  const SnapshotSet x = generate(pt.geometry, pt.sources, cfg.t_count, cfg.noise_var, seed);
  const CovarianceEstimate c = sample_covariance(x);
  TrialOutcome out;
  out.elevation_clamps = x.clamp_count;
  for (const auto& name : cfg.estimators) {
    EstimatorOutcome eo;
    try {
      if (name == "proposed") {
        const AngularEstimate est = estimate(c, pt.geometry, k);
        RMatrix cost(k, k);
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) {
            const auto& t = pt.sources[static_cast<std::size_t>(b)].nominal;
            const auto& e = est.sources[static_cast<std::size_t>(a)];
            cost(a, b) = std::hypot(e.theta - t.theta, e.phi - t.phi);
          }
        }
        const std::vector<int> assign = hungarian(cost);
        eo.errors.resize(static_cast<std::size_t>(k));
        for (int a = 0; a < k; ++a) {
          const auto& e = est.sources[static_cast<std::size_t>(a)];
          const auto& t = pt.sources[static_cast<std::size_t>(assign[static_cast<std::size_t>(a)])];
          eo.errors[static_cast<std::size_t>(assign[static_cast<std::size_t>(a)])] =
              error_deg(t, e.theta, e.phi, e.sigma_theta, e.sigma_phi);
        }
        out.grouping_confidence = est.grouping_confidence;
        out.doa_clamps = est.doa_clamp_count;
        out.spread_floors = est.spread_floor_count;
      } else {
        Objective f;
        if (name == "subspace") {
          f = SubspaceEvaluator(c.r_hat, pt.geometry);
        } else {
          const double nv = subspace_split(c, k).noise_var_hat;
          DispareEvaluator d(c.r_hat, pt.geometry, nv);
          out.dispare_dim = d.pseudosignal_dim();
          f = std::move(d);
        }
        for (const auto& t : pt.sources) {
          const SearchGrid grid =
              SearchGrid::local(t.nominal, cfg.grid.doa_half_width, cfg.grid.doa_step,
                                cfg.grid.spread_lo, cfg.grid.spread_hi, cfg.grid.spread_step);
          const GridResult r = grid_search(f, grid);
          eo.errors.push_back(error_deg(t, r.best.theta, r.best.phi, r.best.sigma_theta,
                                        r.best.sigma_phi));
        }
      }
      eo.ok = true;
    } catch (const std::exception&) {
      eo.ok = false;
      eo.errors.clear();
    }
    out.by_estimator.push_back(std::move(eo));
  }
  return out;
}

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

RmseTable run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Sweep sweep = expand(cfg);
  const std::size_t n_points = sweep.points.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_jobs = n_points * n_trials;
  std::vector<TrialOutcome> outcomes(n_jobs);

  unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const std::size_t p = job / n_trials;
      const std::size_t t = job % n_trials;
      try {
        outcomes[job] = run_trial(cfg, sweep.points[p], derive_key(cfg.seed, {p, t}));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  RmseTable table;
  for (std::size_t p = 0; p < n_points; ++p) {
    const SweepPoint& pt = sweep.points[p];
    const int k = static_cast<int>(pt.sources.size());
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      // sum of squared errors per (source, class)
      std::vector<std::array<double, 4>> sse(static_cast<std::size_t>(k), {0, 0, 0, 0});
      int ok = 0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const EstimatorOutcome& eo = outcomes[p * n_trials + t].by_estimator[e];
        if (!eo.ok) continue;
        ++ok;
        for (int s = 0; s < k; ++s) {
          for (int c = 0; c < 4; ++c) {
            const double d = eo.errors[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
            sse[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] += d * d;
          }
        }
      }
      const int failed = static_cast<int>(n_trials) - ok;
      for (int c = 0; c < 4; ++c) {
        double mean = 0.0;
        for (int s = 0; s < k; ++s) {
          const double r =
              ok > 0 ? std::sqrt(sse[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] / ok)
                     : std::numeric_limits<double>::quiet_NaN();
          mean += r / k;
          table.source_rows.push_back({sweep.axis, pt.value, cfg.estimators[e],
                                       kParamClasses[static_cast<std::size_t>(c)], s, r});
        }
        table.rows.push_back({sweep.axis, pt.value, cfg.estimators[e],
                              kParamClasses[static_cast<std::size_t>(c)], mean, ok, failed});
      }
    }

    std::vector<double> confidence;
    double clamps = 0.0;
    double floors = 0.0;
    double elev = 0.0;
    double dim_sum = 0.0;
    int dim_n = 0;
    for (std::size_t t = 0; t < n_trials; ++t) {
      const TrialOutcome& o = outcomes[p * n_trials + t];
      confidence.push_back(o.grouping_confidence);
      clamps += o.doa_clamps;
      floors += o.spread_floors;
      elev += static_cast<double>(o.elevation_clamps);
      if (o.dispare_dim >= 0) {
        dim_sum += o.dispare_dim;
        ++dim_n;
      }
    }
    auto diag = [&](const char* name, double v) {
      table.diagnostics.push_back({sweep.axis, pt.value, name, v});
    };
    const std::vector<SnrReport> snr = snr_of(pt.sources, cfg.noise_var);
    diag("snr_ratio_db", snr.front().ratio_db);
    diag("signal_power", snr.front().power);
    diag("grouping_confidence_median", median(confidence));
    diag("doa_clamps_total", clamps);
    diag("spread_floors_total", floors);
    diag("elevation_clamps_total", elev);
    if (dim_n > 0) diag("dispare_pseudosignal_dim_mean", dim_sum / dim_n);

    if (cfg.crb) {
      ModelCovParams mp;
      mp.noise_var = cfg.noise_var;
      for (const auto& s : pt.sources) {
        mp.sources.push_back({s.nominal, s.sigma_theta, s.sigma_phi, s.power * s.sigma_gamma_sq});
      }
      try {
        const CrbResult r = crb(pt.geometry, mp, cfg.t_count);
        for (int c = 0; c < 4; ++c) {
          for (int s = 0; s < k; ++s) {
            const Eigen::Index i = c * k + s;
            table.crb_rows.push_back({sweep.axis, pt.value,
                                      kParamClasses[static_cast<std::size_t>(c)], s,
                                      rad_to_deg(std::sqrt(r.c(i, i)))});
          }
        }
        diag("schur_min_eigenvalue", r.schur_min_eigenvalue);
      } catch (const std::exception& ex) {
        table.notes.push_back("CRB at " + sweep.axis + "=" + std::to_string(pt.value) + ": " +
                              ex.what());
      }
    }
  }
  return table;
}

}  // namespace idesprit
