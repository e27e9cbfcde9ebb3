#include "idesprit/source_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "idesprit/rng.hpp"

namespace idesprit {

namespace {

enum StreamTag : std::uint64_t { kSymbolStream = 1, kNoiseStream = 2, kPathStream = 3 };

}  // namespace

std::vector<std::string> validate(const SourceParams& s) {
  check_range(s.nominal);
  if (!(s.sigma_theta >= 0.0) || !(s.sigma_phi >= 0.0)) {
    throw std::invalid_argument("angular spreads must be non-negative");
  }
  if (s.sigma_theta >= kSpreadLimit || s.sigma_phi >= kSpreadLimit) {
    throw std::invalid_argument("angular spread must be < 0.2 rad (small-spread model)");
  }
  if (!(s.sigma_gamma_sq > 0.0)) {
    throw std::invalid_argument("path-gain variance must be positive");
  }
  if (!(s.power > 0.0)) {
    throw std::invalid_argument("signal power must be positive");
  }
  if (s.n_paths < 1) {
    throw std::invalid_argument("n_paths must be >= 1");
  }
  std::vector<std::string> warnings;
  if (s.sigma_theta > kSpreadWarn || s.sigma_phi > kSpreadWarn) {
    std::ostringstream os;
    os << "spread (" << s.sigma_theta << ", " << s.sigma_phi
       << ") rad exceeds 0.05 rad; first-order expansion accuracy degrades";
    warnings.push_back(os.str());
  }
  return warnings;
}

SnapshotSet generate(const UraGeometry& g, std::span<const SourceParams> sources, int t_count,
                     double noise_var, std::uint64_t seed) {
  if (sources.empty()) {
    throw std::invalid_argument("generate: at least one source is required");
  }
  if (t_count < 1) {
    throw std::invalid_argument("generate: T must be >= 1");
  }
  if (!(noise_var >= 0.0)) {
    throw std::invalid_argument("generate: noise variance must be >= 0");
  }
  for (const auto& s : sources) {
    validate(s);
  }

  const int m_count = g.size();
  SnapshotSet out{CMatrix::Zero(m_count, t_count), g, t_count, seed, noise_var, 0};

  std::vector<cdouble> px(static_cast<std::size_t>(g.mx()));
  std::vector<cdouble> py(static_cast<std::size_t>(g.my()));
  const double phi_lo = kElevationGuard;
  const double phi_hi = kPi / 2.0 - kElevationGuard;

  for (int t = 0; t < t_count; ++t) {
    auto x = out.data.col(t);
    if (noise_var > 0.0) {
      CounterRng noise(derive_key(seed, {kNoiseStream, static_cast<std::uint64_t>(t)}));
      for (int m = 0; m < m_count; ++m) {
        const auto [re, im] = noise.next_complex_normal(noise_var);
        x(m) = cdouble(re, im);
      }
    }
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const SourceParams& src = sources[k];
      CounterRng symbols(derive_key(seed, {kSymbolStream, k, static_cast<std::uint64_t>(t)}));
      const double amp = std::sqrt(src.power);
      const double symbol = symbols.next_bit() ? amp : -amp;
      const double path_var = src.sigma_gamma_sq / src.n_paths;

      for (int j = 0; j < src.n_paths; ++j) {
        CounterRng path(derive_key(
            seed, {kPathStream, k, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(t)}));
        const double theta = src.nominal.theta + src.sigma_theta * path.next_normal();
        double phi = src.nominal.phi + src.sigma_phi * path.next_normal();
        const auto [gre, gim] = path.next_complex_normal(path_var);
        if (phi < 0.0 || phi >= kPi / 2.0) {
          phi = std::clamp(phi, phi_lo, phi_hi);
          ++out.clamp_count;
        }
        const double sp = g.u() * std::sin(phi);
        const double kx = sp * std::cos(theta);
        const double ky = sp * std::sin(theta);
        for (int ix = 0; ix < g.mx(); ++ix) {
          px[static_cast<std::size_t>(ix)] = std::polar(1.0, kx * ix);
        }
        for (int iy = 0; iy < g.my(); ++iy) {
          py[static_cast<std::size_t>(iy)] = std::polar(1.0, ky * iy);
        }
        const cdouble coeff = symbol * cdouble(gre, gim);
        for (int iy = 0; iy < g.my(); ++iy) {
          const cdouble row = coeff * py[static_cast<std::size_t>(iy)];
          for (int ix = 0; ix < g.mx(); ++ix) {
            x(g.index(ix, iy)) += row * px[static_cast<std::size_t>(ix)];
          }
        }
      }
    }
  }
  return out;
}

std::vector<SnrReport> snr_of(std::span<const SourceParams> sources, double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("snr_of: noise variance must be positive");
  }
  std::vector<SnrReport> out;
  out.reserve(sources.size());
  for (const auto& s : sources) {
    out.push_back({10.0 * std::log10(s.power * s.sigma_gamma_sq / noise_var), s.power});
  }
  return out;
}

double power_for_snr_db(double snr_db, double sigma_gamma_sq, double noise_var) {
  return std::pow(10.0, snr_db / 10.0) * noise_var / sigma_gamma_sq;
}

}  // namespace idesprit
