#pragma once

#include "lobeq/dist.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lobeq {

/// Full parameterization of the single-asset model (ask side; the bid side
/// follows by symmetry).
struct ModelParams {
  double r;         ///< fraction of events that are information jumps
  double f;         ///< race parameter: P(informed trader beats the IMM cancel)
  JumpLaw jump;     ///< law of the jump magnitude B
  VolumeLaw volume; ///< law of the signed noise volume Q^u
  double lambda_i = 0.0;  ///< jump intensity (optional, 0 = unset)
  double lambda_u = 0.0;  ///< noise-trade intensity (optional, 0 = unset)
  double theta = 0.0;     ///< noise impact per unit sign surprise
  double rho = 0.0;       ///< first-order autocorrelation of noise trade signs
  double tick = 0.0;      ///< tick size alpha; 0 means continuous prices
  double offset_d = 0.0;  ///< distance from the efficient price to the next grid price

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
  /// Sign persistence probability P(X_j = X_{j-1}).
  double gamma() const { return 0.5 * (1.0 + rho); }
};

/// Cumulative depth at one price distance. Keeps "no liquidity", "finite"
/// and "unbounded" apart instead of encoding them in magic floats.
class Liquidity {
 public:
  enum class Regime { Empty, Finite, Unbounded };

  Liquidity() = default;
  static Liquidity empty() { return {}; }
  static Liquidity finite(double volume);
  static Liquidity unbounded();

  Regime regime() const noexcept { return regime_; }
  bool is_empty() const noexcept { return regime_ == Regime::Empty; }
  bool is_finite() const noexcept { return regime_ == Regime::Finite; }
  bool is_unbounded() const noexcept { return regime_ == Regime::Unbounded; }
  /// Volume; 0 when empty, +infinity when unbounded.
  double value() const noexcept;

  friend bool operator==(const Liquidity&, const Liquidity&) = default;

 private:
  Regime regime_ = Regime::Empty;
  double volume_ = 0.0;
};

/// Maps a break-even fill level F_u(L) to a depth: <= 1/2 is empty,
/// >= 1 is unbounded, anything in between goes through the volume quantile.
Liquidity depth_at_level(const VolumeLaw& volume, double level);
/// Same from the tail 1 - level, which keeps levels within an ulp of 1
/// finite: >= 1/2 is empty, <= 0 is unbounded.
Liquidity depth_at_tail(const VolumeLaw& volume, double tail);

struct BookShape {
  std::vector<double> grid;          ///< price distances from the efficient price
  std::vector<Liquidity> informed;   ///< L_i (informed market makers)
  std::vector<Liquidity> noise;      ///< L_u (noise market makers)
  std::vector<Liquidity> effective;  ///< visible book, max(L_i, L_u)
  std::vector<Liquidity> per_level;  ///< l^d(i), tick grids only
  std::vector<std::vector<Liquidity>> sources;  ///< L_k per source, multi-source only

  std::size_t size() const noexcept { return grid.size(); }
};

enum class SpreadRegime { Finite, ZeroSpread };

struct SpreadSolution {
  SpreadRegime regime = SpreadRegime::Finite;
  double phi = 0.0;        ///< half-spread with informed market makers (theta = 0)
  double mu = 0.0;         ///< noise-maker half-spread (f = 1)
  double phi_theta = 0.0;  ///< half-spread with noise toxicity
  double theta_bar = 0.0;
  std::optional<int> k_d;             ///< first occupied tick level
  std::optional<double> spread_tick;  ///< full spread on the tick grid
  int solver_iters = 0;
  double residual = 0.0;  ///< worst relative residual over the equations solved
};

// -------------------------------------------------------------- gains

/// Conditional gain of an infinitesimal IMM order at distance x with `depth`
/// resting ahead of it. nullopt when no fill channel is open at x.
std::optional<double> gain_imm(const ModelParams& p, double x, Liquidity depth);
/// Same for the noise market maker (race parameter replaced by 1).
std::optional<double> gain_nmm(const ModelParams& p, double x, Liquidity depth);

/// Expected post-trade drift conditional on a noise buy, theta * (1 - rho^2).
double theta_bar(const ModelParams& p);

// -------------------------------------------------------------- shapes

/// Break-even fill level for a maker whose cancel loses the race with
/// probability `race` (race = f for the IMM, 1 for the NMM).
double break_even_level(const ModelParams& p, double race, double x);
/// 1 - break_even_level without the cancellation; +inf where the level is
/// -inf.
double break_even_tail(const ModelParams& p, double race, double x);

BookShape shape_continuous(const ModelParams& p, std::span<const double> x_grid);
BookShape shape_toxic(const ModelParams& p, std::span<const double> x_grid);
/// Half-spreads bounding the informed and noise books (toxicity included).
/// With f = 0 the informed edge is Theta: every level beyond it is unbounded.
struct HalfSpreads {
  double informed = 0.0;
  double noise = 0.0;
};
HalfSpreads half_spreads(const ModelParams& p);

/// Levels i = 1..n_levels at distance offset_d + (i-1) * tick.
BookShape shape_tick(const ModelParams& p, int n_levels);
/// Same, reusing half-spreads already solved for these parameters (they do
/// not depend on offset_d).
BookShape shape_tick(const ModelParams& p, int n_levels, const HalfSpreads& edges);

// -------------------------------------------------------------- spreads

SpreadSolution spread_continuous(const ModelParams& p);
SpreadSolution spread_toxic(const ModelParams& p);
SpreadSolution spread_tick(const ModelParams& p);

/// Smallest integer strictly larger than y.
long long ceil_strict(double y);
/// k_d = min{k >= 1 : d + (k-1) alpha > phi}, evaluated with the same
/// arithmetic as the tick grid.
int first_occupied_level(double phi, double d, double alpha);
/// min{m >= 1 : m alpha - d > phi}: ticks from the efficient price's grid
/// point to the first occupied bid.
int first_occupied_bid_level(double phi, double d, double alpha);

// -------------------------------------------------------------- multi-source

struct JumpSource {
  double r;
  double f;
  JumpLaw jump;
};

struct MultiSourceParams {
  std::vector<JumpSource> sources;
  VolumeLaw volume;

  void validate() const;
  double race() const;
  double total_r() const;
};

std::optional<double> gain_imm_multi(const MultiSourceParams& mp, std::size_t j, double x, Liquidity depth);
/// Per-source shapes in `sources`, the noise-maker book in `noise`, and the
/// visible book F_u^{-1}[max_k F_u(L_k)] in both `informed` and `effective`.
BookShape shape_multi(const MultiSourceParams& mp, std::span<const double> x_grid);

}  // namespace lobeq
