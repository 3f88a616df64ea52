#include "fixtures.hpp"

namespace lobeq::fixtures {

std::vector<double> finite_region_grid(const ModelParams& p, double race, int n, double h_lo, double h_hi) {
  auto solve = [&](double target) {
    double lo = std::max(theta_bar(p), 1e-12) * (1.0 + 1e-12);
    double hi = 1.0;
    while (break_even_level(p, race, hi) < target) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (break_even_level(p, race, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(solve(h_lo + (h_hi - h_lo) * i / (n - 1)));
  return out;
}

}  // namespace lobeq::fixtures
