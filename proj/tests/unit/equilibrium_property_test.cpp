#include "lobeq/equilibrium.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace lobeq {
namespace {

constexpr int kRandomSets = 50;

double h_of(const ModelParams& p, double race, double x) { return break_even_level(p, race, x); }

bool strictly_inside(double h) { return h > 0.5 && h < 1.0; }

TEST(Property, BreakEvenClosureContinuous) {
  std::mt19937_64 rng(101);
  for (int s = 0; s < kRandomSets; ++s) {
    const auto p = fixtures::random_params(rng);
    const auto grid = fixtures::finite_region_grid(p, 1.0, 20, 0.51, 0.999);
    const auto shape = shape_continuous(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (strictly_inside(h_of(p, p.f, grid[i]))) {
        EXPECT_LE(std::abs(*gain_imm(p, grid[i], shape.informed[i])), 1e-9) << "set " << s << " x=" << grid[i];
      }
      if (strictly_inside(h_of(p, 1.0, grid[i]))) {
        EXPECT_LE(std::abs(*gain_nmm(p, grid[i], shape.noise[i])), 1e-9) << "set " << s << " x=" << grid[i];
      }
    }
  }
}

TEST(Property, BreakEvenClosureToxic) {
  std::mt19937_64 rng(102);
  for (int s = 0; s < kRandomSets; ++s) {
    auto p = fixtures::random_params(rng);
    p.rho = std::uniform_real_distribution<double>(-0.9, 0.9)(rng);
    p.theta = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * p.jump.mean();
    const auto grid = fixtures::finite_region_grid(p, 1.0, 20, 0.51, 0.999);
    const auto shape = shape_toxic(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (strictly_inside(h_of(p, p.f, grid[i]))) {
        EXPECT_LE(std::abs(*gain_imm(p, grid[i], shape.informed[i])), 1e-9) << "set " << s << " x=" << grid[i];
      }
      if (strictly_inside(h_of(p, 1.0, grid[i]))) {
        EXPECT_LE(std::abs(*gain_nmm(p, grid[i], shape.noise[i])), 1e-9) << "set " << s << " x=" << grid[i];
      }
    }
  }
}

TEST(Property, BreakEvenClosureTick) {
  std::mt19937_64 rng(103);
  for (int s = 0; s < kRandomSets; ++s) {
    auto p = fixtures::random_params(rng);
    p.tick = p.jump.mean() / 4.0;
    p.offset_d = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * p.tick;
    const auto shape = shape_tick(p, 30);
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (shape.informed[i].is_finite() && strictly_inside(h_of(p, p.f, shape.grid[i]))) {
        EXPECT_LE(std::abs(*gain_imm(p, shape.grid[i], shape.informed[i])), 1e-9) << "set " << s << " level " << i + 1;
      }
      if (shape.noise[i].is_finite() && strictly_inside(h_of(p, 1.0, shape.grid[i]))) {
        EXPECT_LE(std::abs(*gain_nmm(p, shape.grid[i], shape.noise[i])), 1e-9) << "set " << s << " level " << i + 1;
      }
    }
  }
}

TEST(Property, BreakEvenClosureMultiSource) {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < kRandomSets; ++s) {
    const double f = 0.05 + 0.95 * u(rng);
    MultiSourceParams mp{{{0.05 + 0.4 * u(rng), f, JumpLaw::pareto(2.0 + 2.0 * u(rng), 0.002 + 0.01 * u(rng))},
                          {0.05 + 0.4 * u(rng), f, JumpLaw::exponential(50.0 + 500.0 * u(rng))}},
                         u(rng) < 0.5 ? VolumeLaw::normal(1.0 + 10.0 * u(rng)) : VolumeLaw::laplace(1.0 + 5.0 * u(rng))};
    auto as_noise = mp;
    for (auto& src : as_noise.sources) src.f = 1.0;
    const auto grid = fixtures::geometric_grid(1e-4, 0.5, 60);
    const auto shape = shape_multi(mp, grid);
    for (std::size_t k = 0; k < mp.sources.size(); ++k) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& l = shape.sources[k][i];
        if (!l.is_finite()) continue;
        const double level = 1.0 - oracle::volume_cdf(mp.volume, l.value());
        if (level > 1e-6 && level < 0.49) {
          EXPECT_LE(std::abs(*gain_imm_multi(mp, k, grid[i], l)), 1e-9) << "set " << s << " source " << k;
        }
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& l = shape.noise[i];
      if (!l.is_finite()) continue;
      const double level = 1.0 - oracle::volume_cdf(mp.volume, l.value());
      if (level > 1e-6 && level < 0.49) {
        EXPECT_LE(std::abs(*gain_imm_multi(as_noise, 0, grid[i], l)), 1e-9) << "set " << s;
      }
    }
  }
}

TEST(Property, ClosedFormMatchesGainRootOnRandomSets) {
  std::mt19937_64 rng(105);
  for (int s = 0; s < kRandomSets; ++s) {
    const auto p = fixtures::random_params(rng);
    const auto grid = fixtures::finite_region_grid(p, p.f, 20);
    const auto shape = shape_continuous(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto root = oracle::break_even_depth(p, p.f, grid[i]);
      ASSERT_TRUE(root.has_value()) << "set " << s << " x=" << grid[i];
      ASSERT_TRUE(shape.informed[i].is_finite());
      EXPECT_NEAR(shape.informed[i].value(), *root, 1e-7 * *root) << "set " << s << " x=" << grid[i];
    }
  }
}

TEST(Property, DominanceIdentity) {
  std::mt19937_64 rng(106);
  for (int s = 0; s < kRandomSets; ++s) {
    const auto p = fixtures::random_params(rng);
    const auto grid = fixtures::finite_region_grid(p, 1.0, 20, 0.51, 0.999);
    const auto shape = shape_continuous(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!shape.informed[i].is_finite() || !shape.noise[i].is_finite()) continue;
      const double tail_i = 1.0 - oracle::volume_cdf(p.volume, shape.informed[i].value());
      const double tail_u = 1.0 - oracle::volume_cdf(p.volume, shape.noise[i].value());
      EXPECT_NEAR(tail_i, p.f * tail_u, 1e-12) << "set " << s << " x=" << grid[i];
    }
  }
}

TEST(Property, InformedDominatesAndSpreadOrdering) {
  std::mt19937_64 rng(107);
  for (int s = 0; s < kRandomSets; ++s) {
    auto p = fixtures::random_params(rng);
    if (s % 10 == 0) p.f = 1.0;
    const auto grid = fixtures::geometric_grid(p.jump.mean() / 50.0, p.jump.mean() * 50.0, 100);
    const auto shape = shape_continuous(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(shape.informed[i].value(), shape.noise[i].value());
      EXPECT_EQ(shape.effective[i].value(), std::max(shape.informed[i].value(), shape.noise[i].value()));
      if (i > 0) {
        EXPECT_GE(shape.effective[i].value(), shape.effective[i - 1].value());
      }
    }
    const auto sol = spread_continuous(p);
    if (p.f == 1.0) {
      EXPECT_EQ(sol.phi, sol.mu);
    } else {
      EXPECT_LT(sol.phi, sol.mu) << "set " << s;
    }
  }
}

TEST(Property, MonotoneInRaceAndJumpShare) {
  const auto grid = fixtures::geometric_grid(0.004, 0.1, 25);
  std::vector<double> axis;
  for (int i = 1; i <= 10; ++i) axis.push_back(0.095 * i);
  auto at = [&](double r, double f) {
    auto p = fixtures::paper_params();
    p.r = r;
    p.f = f;
    return std::pair{shape_continuous(p, grid), spread_continuous(p)};
  };
  for (std::size_t a = 0; a < axis.size(); ++a) {
    for (std::size_t b = 0; b + 1 < axis.size(); ++b) {
      const auto [s_f0, sp_f0] = at(axis[a], axis[b]);
      const auto [s_f1, sp_f1] = at(axis[a], axis[b + 1]);
      const auto [s_r0, sp_r0] = at(axis[b], axis[a]);
      const auto [s_r1, sp_r1] = at(axis[b + 1], axis[a]);
      EXPECT_LE(sp_f0.phi, sp_f1.phi);
      EXPECT_LE(sp_r0.phi, sp_r1.phi);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_GE(s_f0.effective[i].value(), s_f1.effective[i].value());
        EXPECT_GE(s_r0.effective[i].value(), s_r1.effective[i].value());
      }
    }
  }
}

TEST(Property, TickConsistencyIncludingAlignedSpread) {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int aligned = 0;
  for (int s = 0; s < 200; ++s) {
    auto p = fixtures::random_params(rng);
    if (s % 4 == 3) p.theta = 0.3 * p.jump.mean() * u(rng);
    const double half = spread_toxic(p).phi_theta;
    p.tick = half * (0.1 + 1.5 * u(rng));
    if (s % 2 == 0) {
      // Put a grid point exactly on the half-spread.
      p.offset_d = half - std::floor(half / p.tick) * p.tick;
      if (!(p.offset_d < p.tick)) p.offset_d = 0.0;
      ++aligned;
    } else {
      p.offset_d = u(rng) * p.tick;
    }
    const auto sol = spread_tick(p);
    const int n = *sol.k_d + 3;
    const auto shape = shape_tick(p, n);
    for (int i = 1; i <= n; ++i) {
      const bool empty = shape.per_level[static_cast<std::size_t>(i - 1)].value() == 0.0;
      EXPECT_EQ(empty, i < *sol.k_d) << "set " << s << " level " << i << " k_d " << *sol.k_d << " d "
                                     << p.offset_d << " tick " << p.tick << " half " << half;
    }
  }
  EXPECT_EQ(aligned, 100);
}

TEST(Property, ToxicSpreadOrdering) {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < kRandomSets; ++s) {
    auto p = fixtures::random_params(rng);
    const double phi = spread_continuous(p).phi;
    p.theta = (0.01 + 2.0 * u(rng)) * p.jump.mean();
    p.rho = -0.9 + 1.8 * u(rng);
    const auto sol = spread_toxic(p);
    EXPECT_GE(sol.phi_theta, phi) << "set " << s;
    EXPECT_GT(sol.phi_theta, sol.theta_bar) << "set " << s;
  }
}

TEST(Property, ToxicShapeMatchesGainRoot) {
  std::mt19937_64 rng(110);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    auto p = fixtures::random_params(rng);
    p.theta = 0.5 * u(rng) * p.jump.mean();
    p.rho = -0.5 + u(rng);
    const auto grid = fixtures::finite_region_grid(p, p.f, 10);
    const auto shape = shape_toxic(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto root = oracle::break_even_depth(p, p.f, grid[i]);
      ASSERT_TRUE(root.has_value());
      EXPECT_NEAR(shape.informed[i].value(), *root, 1e-7 * *root) << "set " << s << " x=" << grid[i];
    }
  }
}

}  // namespace
}  // namespace lobeq
