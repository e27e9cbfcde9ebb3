// bench: Monte Carlo sweeps, complexity table and snapshot dumps.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "idesprit/baselines.hpp"
#include "idesprit/complexity.hpp"
#include "idesprit/experiment.hpp"
#include "idesprit/report.hpp"
#include "idesprit/rng.hpp"
#include "idesprit/snapshot_io.hpp"

using namespace idesprit;

namespace {

std::vector<ComplexityPoint> complexity_for(const ExperimentConfig& cfg, const Sweep& sweep) {
  const auto doa = static_cast<std::uint64_t>(
      ParamAxis::centered(0.0, cfg.grid.doa_half_width, cfg.grid.doa_step).count());
  const auto spread = static_cast<std::uint64_t>(
      ParamAxis(cfg.grid.spread_lo, cfg.grid.spread_hi, cfg.grid.spread_step).count());
  std::vector<ComplexityPoint> out;
  for (const auto& pt : sweep.points) {
    ComplexityPoint c;
    c.m = static_cast<std::uint64_t>(pt.geometry.size());
    c.t = static_cast<std::uint64_t>(cfg.t_count);
    c.k = pt.sources.size();
    try {
      c.table = complexity_table(c.m, c.t, c.k, doa, spread);
    } catch (const std::overflow_error&) {
      continue;
    }
    out.push_back(c);
  }
  return out;
}

int cmd_run(const std::string& config, const std::string& out_dir, unsigned threads,
            std::optional<std::uint64_t> seed, std::optional<int> trials) {
  ExperimentConfig cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  if (trials) cfg.trials = *trials;
  if (cfg.u > kPi) {
    std::cerr << "warning: u > pi, DOAs may alias spatially\n";
  }
  const Sweep sweep = expand(cfg);
  std::cerr << cfg.name << ": " << sweep.points.size() << " point(s) along " << sweep.axis << ", "
            << cfg.trials << " trials each\n";
  const auto t0 = std::chrono::steady_clock::now();
  const RmseTable table = run_experiment(cfg, {threads});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto cx = complexity_for(cfg, sweep);
  const auto files = emit(table, cx, out_dir);
  for (const auto& n : table.notes) std::cerr << "note: " << n << '\n';

  std::printf("%-10s %-12s %-9s %-12s %12s %6s\n", sweep.axis.c_str(), "estimator", "class",
              "rmse_deg", "crb_mean_deg", "failed");
  for (const auto& r : table.rows) {
    double crb = 0.0;
    int n = 0;
    for (const auto& c : table.crb_rows) {
      if (c.sweep_value == r.sweep_value && c.param_class == r.param_class) {
        crb += c.crb_sqrt_deg;
        ++n;
      }
    }
    std::printf("%-10g %-12s %-9s %-12.5g %12.5g %6d\n", r.sweep_value, r.estimator.c_str(),
                std::string(to_string(r.param_class)).c_str(), r.rmse_deg,
                n > 0 ? crb / n : 0.0, r.trials_failed);
  }
  std::cerr << "wrote " << files.size() << " files to " << out_dir << " in " << secs << " s\n";
  return 0;
}

int cmd_complexity(std::uint64_t m, std::uint64_t t, std::uint64_t k, std::uint64_t grid_doa,
                   std::uint64_t grid_spread, const std::string& out) {
  const ComplexityTable tab = complexity_table(m, t, k, grid_doa, grid_spread);
  std::printf("D1 = %llu (%.5g)\nD2 = %llu (%.5g)\n", static_cast<unsigned long long>(tab.d1),
              static_cast<double>(tab.d1), static_cast<unsigned long long>(tab.d2),
              static_cast<double>(tab.d2));
  for (const auto& r : tab.rows) {
    std::printf("%-9s %22llu  ~ %.5g\n", r.method.c_str(), static_cast<unsigned long long>(r.count),
                static_cast<double>(r.count));
  }
  const double ratio = static_cast<double>(tab.row("proposed").count) /
                       static_cast<double>(tab.row("dispare").count);
  std::printf("proposed / dispare = %.3e (%.5f %%)\n", ratio, 100.0 * ratio);
  if (!out.empty()) {
    const ComplexityPoint p{m, t, k, tab};
    write_atomic(out, complexity_csv(std::span(&p, 1)));
  }
  return 0;
}

int cmd_dump(const std::string& config, const std::string& out, std::size_t point,
             std::uint64_t trial) {
  const ExperimentConfig cfg = load_config(config);
  const Sweep sweep = expand(cfg);
  if (point >= sweep.points.size()) {
    throw std::out_of_range("sweep point " + std::to_string(point) + " does not exist");
  }
  const SweepPoint& pt = sweep.points[point];
  const std::uint64_t seed = derive_key(cfg.seed, {point, trial});
  const SnapshotSet x = generate(pt.geometry, pt.sources, cfg.t_count, cfg.noise_var, seed);
  write_snapshots(out, x);
  std::cerr << "wrote " << x.data.rows() << " x " << x.data.cols() << " snapshots (seed " << seed
            << ") to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ESPRIT distributed-source estimator: Monte Carlo bench"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  auto* run = app.add_subcommand("run", "run a sweep and write CSVs and plots");
  run->add_option("config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (0 = all cores)");
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--trials", trials, "override the trial count");

  std::uint64_t m = 100, t = 500, k = 2, gd = 11, gs = 10;
  std::string cx_out;
  auto* cx = app.add_subcommand("complexity", "print the operation-count table");
  cx->add_option("--m", m, "antennas");
  cx->add_option("--t", t, "snapshots");
  cx->add_option("--k", k, "sources");
  cx->add_option("--grid-doa", gd, "grid points per DOA parameter");
  cx->add_option("--grid-spread", gs, "grid points per spread parameter");
  cx->add_option("--out", cx_out, "optional CSV output");

  std::string dump_out = "snapshots.bin";
  std::size_t point = 0;
  std::uint64_t trial = 0;
  auto* dump = app.add_subcommand("dump-snapshots", "write one trial's snapshots in binary form");
  dump->add_option("config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
  dump->add_option("--out", dump_out, "output file");
  dump->add_option("--point", point, "sweep point index");
  dump->add_option("--trial", trial, "trial index");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, out_dir, threads, seed, trials);
    if (*cx) return cmd_complexity(m, t, k, gd, gs, cx_out);
    if (*dump) return cmd_dump(config, dump_out, point, trial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
