#pragma once

#include "lobeq/dist.hpp"
#include "lobeq/equilibrium.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace lobeq::fixtures {

/// Numerical example parameters: r = f = 0.9, Normal(10) volumes,
/// Pareto(3, 0.005) jumps.
inline ModelParams paper_params(double tick = 0.0, double offset_d = 0.0) {
  ModelParams p{.r = 0.9, .f = 0.9, .jump = JumpLaw::pareto(3.0, 0.005), .volume = VolumeLaw::normal(10.0)};
  p.tick = tick;
  p.offset_d = offset_d;
  return p;
}

/// Random parameters over r in [0.05, 0.95], f in [0.05, 1], Pareto or
/// Exponential jumps and Normal or Laplace volumes.
inline ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = 0.05 + 0.9 * u(rng);
  const double f = 0.05 + 0.95 * u(rng);
  const JumpLaw jump = u(rng) < 0.5 ? JumpLaw::pareto(1.5 + 3.5 * u(rng), 0.001 + 0.05 * u(rng))
                                    : JumpLaw::exponential(20.0 + 980.0 * u(rng));
  const VolumeLaw volume = u(rng) < 0.5 ? VolumeLaw::normal(1.0 + 19.0 * u(rng)) : VolumeLaw::laplace(0.5 + 9.5 * u(rng));
  return ModelParams{.r = r, .f = f, .jump = jump, .volume = volume};
}

/// Geometric grid on [lo, hi].
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

/// Points x where lo < h(x) < hi for the given race, evenly spread in h.
/// Used to place probes in the finite-depth region; the search uses the
/// library's h only to pick abscissae, never to check values.
std::vector<double> finite_region_grid(const ModelParams& p, double race, int n, double h_lo = 0.55, double h_hi = 0.995);

}  // namespace lobeq::fixtures
