#include "lobeq/equilibrium.hpp"

#include "lobeq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lobeq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

ModelParams without_toxicity(const ModelParams& p) {
  ModelParams q = p;
  q.theta = 0.0;
  return q;
}

// Conditional gain of a marginal order for a maker that is picked off by
// the informed trader with probability `race` per jump through x.
std::optional<double> gain(const ModelParams& p, double race, double x, Liquidity depth) {
  if (!(x > 0.0)) throw std::domain_error("gain requires x > 0");
  const double noise_fill = depth.is_unbounded() ? 0.0 : p.volume.survival(depth.value());
  const double jump_fill = p.jump.survival(x);
  const double tail = p.jump.tail_expectation(x);
  const double w = race * p.r;
  const double denom = (1.0 - p.r) * noise_fill + w * jump_fill;
  if (!(denom > 0.0)) return std::nullopt;
  const double drift = theta_bar(p);
  return x - drift + w * (drift * jump_fill - tail) / denom;
}

struct HalfSpread {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Solves E[max(B/s,1)] = 1 + c (s - Theta)/s with c = (1-r)/(2 r race).
// Equivalent to break_even_level(p, race, s) = 1/2.
HalfSpread solve_half_spread(const ModelParams& p, double race) {
  const double drift = theta_bar(p);
  const double c = (1.0 - p.r) / (2.0 * p.r * race);
  const auto& law = p.jump;
  auto excess = [&](double s) { return law.emax_excess(s) - c * (s - drift) / s; };
  auto relative_residual = [&](double s) {
    const double rhs = 1.0 + c * (s - drift) / s;
    return std::abs(law.emax_ratio(s) - rhs) / rhs;
  };

  const double smin = law.support_min();
  // Below the support every jump crosses s, emax = E[B]/s and the equation is linear.
  const double explicit_root = (law.mean() + c * drift) / (1.0 + c);
  if (explicit_root <= smin && explicit_root > drift) {
    return {explicit_root, 0, relative_residual(explicit_root)};
  }

  double lo = std::max(smin, drift) * (1.0 + 1e-9);
  if (!(lo > 0.0)) lo = law.mean() * 1e-9;
  if (!(excess(lo) > 0.0)) {
    // No jump exceeds the drift: the marginal order only faces noise trades.
    const double s = std::max(lo, drift);
    return {s, 0, drift > 0.0 ? 0.0 : relative_residual(s)};
  }
  const RootResult root = bisect_decreasing(excess, lo, 2.0 * lo);
  return {root.root, root.iterations, relative_residual(root.root)};
}

}  // namespace

// ------------------------------------------------------------ ModelParams

void ModelParams::validate() const {
  require(r > 0.0 && r < 1.0, "r must lie in (0, 1)");
  require(in_unit(f), "f must lie in [0, 1]");
  require(lambda_i >= 0.0 && lambda_u >= 0.0, "intensities must be nonnegative");
  if (lambda_i > 0.0 && lambda_u > 0.0) {
    const double implied = lambda_i / (lambda_i + lambda_u);
    require(std::abs(implied - r) <= 1e-12, "r disagrees with lambda_i / (lambda_i + lambda_u)");
  }
  require(theta >= 0.0 && std::isfinite(theta), "theta must be nonnegative");
  require(rho > -1.0 && rho < 1.0, "rho must lie in (-1, 1)");
  require(tick >= 0.0 && std::isfinite(tick), "tick must be nonnegative");
  if (tick > 0.0) {
    require(offset_d >= 0.0 && offset_d < tick, "offset_d must lie in [0, tick)");
  } else {
    require(offset_d == 0.0, "offset_d requires a positive tick");
  }
}

// -------------------------------------------------------------- Liquidity

Liquidity Liquidity::finite(double volume) {
  if (!(volume >= 0.0) || !std::isfinite(volume)) {
    throw std::invalid_argument("finite liquidity must be a nonnegative finite volume");
  }
  Liquidity out;
  if (volume > 0.0) {
    out.regime_ = Regime::Finite;
    out.volume_ = volume;
  }
  return out;
}

Liquidity Liquidity::unbounded() {
  Liquidity out;
  out.regime_ = Regime::Unbounded;
  out.volume_ = std::numeric_limits<double>::infinity();
  return out;
}

double Liquidity::value() const noexcept { return volume_; }

Liquidity depth_at_level(const VolumeLaw& volume, double level) {
  if (!(level > 0.5)) return Liquidity::empty();
  if (level >= 1.0) return Liquidity::unbounded();
  return Liquidity::finite(std::max(0.0, volume.quantile(level)));
}

Liquidity depth_at_tail(const VolumeLaw& volume, double tail) {
  if (!(tail < 0.5)) return Liquidity::empty();
  if (tail <= 0.0) return Liquidity::unbounded();
  return Liquidity::finite(std::max(0.0, volume.upper_quantile(tail)));
}

// ------------------------------------------------------------------ gains

std::optional<double> gain_imm(const ModelParams& p, double x, Liquidity depth) { return gain(p, p.f, x, depth); }

std::optional<double> gain_nmm(const ModelParams& p, double x, Liquidity depth) { return gain(p, 1.0, x, depth); }

double theta_bar(const ModelParams& p) { return p.theta * (1.0 - p.rho * p.rho); }

// ----------------------------------------------------------------- shapes

double break_even_tail(const ModelParams& p, double race, double x) {
  const double drift = theta_bar(p);
  if (!(x > 0.0) || x <= drift) return kInf;
  const double coeff = race * p.r / (1.0 - p.r);
  const double ratio = x / (x - drift);
  return coeff * p.jump.emax_excess(x) * ratio;
}

double break_even_level(const ModelParams& p, double race, double x) { return 1.0 - break_even_tail(p, race, x); }

namespace {

BookShape evaluate_shape(const ModelParams& p, std::span<const double> x_grid) {
  BookShape out;
  out.grid.assign(x_grid.begin(), x_grid.end());
  out.informed.reserve(x_grid.size());
  out.noise.reserve(x_grid.size());
  out.effective.reserve(x_grid.size());
  for (double x : x_grid) {
    const Liquidity li = depth_at_tail(p.volume, break_even_tail(p, p.f, x));
    const Liquidity lu = depth_at_tail(p.volume, break_even_tail(p, 1.0, x));
    out.informed.push_back(li);
    out.noise.push_back(lu);
    out.effective.push_back(li.value() >= lu.value() ? li : lu);
  }
  return out;
}

}  // namespace

BookShape shape_continuous(const ModelParams& p, std::span<const double> x_grid) {
  p.validate();
  require(p.theta == 0.0, "shape_continuous requires theta = 0 (use shape_toxic)");
  return evaluate_shape(p, x_grid);
}

BookShape shape_toxic(const ModelParams& p, std::span<const double> x_grid) {
  p.validate();
  return evaluate_shape(p, x_grid);
}

HalfSpreads half_spreads(const ModelParams& p) {
  p.validate();
  HalfSpreads out;
  out.informed = p.f > 0.0 ? solve_half_spread(p, p.f).value : theta_bar(p);
  out.noise = solve_half_spread(p, 1.0).value;
  return out;
}

BookShape shape_tick(const ModelParams& p, int n_levels) {
  if (!(p.tick > 0.0)) throw std::domain_error("shape_tick requires a positive tick");
  if (!(p.offset_d >= 0.0 && p.offset_d < p.tick)) throw std::domain_error("offset_d must lie in [0, tick)");
  return shape_tick(p, n_levels, half_spreads(p));
}

BookShape shape_tick(const ModelParams& p, int n_levels, const HalfSpreads& edges) {
  if (!(p.tick > 0.0)) throw std::domain_error("shape_tick requires a positive tick");
  if (!(p.offset_d >= 0.0 && p.offset_d < p.tick)) throw std::domain_error("offset_d must lie in [0, tick)");
  p.validate();
  require(n_levels >= 1, "n_levels must be positive");

  std::vector<double> grid(static_cast<std::size_t>(n_levels));
  for (int i = 0; i < n_levels; ++i) grid[static_cast<std::size_t>(i)] = p.offset_d + i * p.tick;
  BookShape out = evaluate_shape(p, grid);

  // The book is empty up to and including the half-spread. Enforcing it on
  // the grid keeps levels aligned exactly on the spread empty.
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.grid[i] <= edges.informed) out.informed[i] = Liquidity::empty();
    if (out.grid[i] <= edges.noise) out.noise[i] = Liquidity::empty();
    out.effective[i] = out.informed[i].value() >= out.noise[i].value() ? out.informed[i] : out.noise[i];
  }

  out.per_level.reserve(out.size());
  double previous = 0.0;
  for (const Liquidity& cum : out.effective) {
    if (cum.is_unbounded()) {
      out.per_level.push_back(Liquidity::unbounded());
    } else {
      out.per_level.push_back(Liquidity::finite(std::max(0.0, cum.value() - previous)));
      previous = cum.value();
    }
  }
  return out;
}

// ---------------------------------------------------------------- spreads

long long ceil_strict(double y) { return static_cast<long long>(std::floor(y)) + 1; }

namespace {

// Smallest m >= lo with pos(m) > phi. The ceiling gives the estimate; the
// scan makes the answer agree with the grid arithmetic bit for bit.
template <class Pos>
long long first_beyond(double phi, long long estimate, long long lo, Pos pos) {
  long long m = std::max(estimate, lo);
  while (m > lo && pos(m - 1) > phi) --m;
  while (!(pos(m) > phi)) ++m;
  return m;
}

}  // namespace

int first_occupied_level(double phi, double d, double alpha) {
  const long long i = first_beyond(phi, ceil_strict((phi - d) / alpha), 0,
                                   [&](long long k) { return d + static_cast<double>(k) * alpha; });
  return static_cast<int>(i + 1);
}

int first_occupied_bid_level(double phi, double d, double alpha) {
  const long long m = first_beyond(phi, ceil_strict((phi + d) / alpha), 1,
                                   [&](long long k) { return static_cast<double>(k) * alpha - d; });
  return static_cast<int>(m);
}

SpreadSolution spread_continuous(const ModelParams& p) {
  p.validate();
  require(p.theta == 0.0, "spread_continuous requires theta = 0 (use spread_toxic)");

  SpreadSolution out;
  const HalfSpread mu = solve_half_spread(p, 1.0);
  out.mu = mu.value;
  if (p.f == 0.0) {
    out.regime = SpreadRegime::ZeroSpread;
    out.solver_iters = mu.iterations;
    out.residual = mu.residual;
    return out;
  }
  const HalfSpread phi = p.f == 1.0 ? mu : solve_half_spread(p, p.f);
  out.phi = phi.value;
  out.phi_theta = phi.value;
  out.solver_iters = phi.iterations + mu.iterations;
  out.residual = std::max(phi.residual, mu.residual);
  return out;
}

SpreadSolution spread_toxic(const ModelParams& p) {
  p.validate();
  if (p.theta == 0.0) return spread_continuous(p);

  SpreadSolution out = spread_continuous(without_toxicity(p));
  out.theta_bar = theta_bar(p);
  if (p.f == 0.0) {
    out.phi_theta = out.theta_bar;
    return out;
  }
  const HalfSpread toxic = solve_half_spread(p, p.f);
  out.phi_theta = toxic.value;
  out.solver_iters += toxic.iterations;
  out.residual = std::max(out.residual, toxic.residual);
  return out;
}

SpreadSolution spread_tick(const ModelParams& p) {
  if (!(p.tick > 0.0)) throw std::domain_error("spread_tick requires a positive tick");
  if (!(p.offset_d >= 0.0 && p.offset_d < p.tick)) throw std::domain_error("offset_d must lie in [0, tick)");
  p.validate();
  SpreadSolution out = spread_toxic(p);
  const double half = p.theta > 0.0 ? out.phi_theta : out.phi;
  const double a = p.tick;
  const double d = p.offset_d;
  out.k_d = first_occupied_level(half, d, a);
  out.spread_tick = a * static_cast<double>(*out.k_d - 1 + first_occupied_bid_level(half, d, a));
  return out;
}

// ----------------------------------------------------------- multi-source

void MultiSourceParams::validate() const {
  require(!sources.empty(), "at least one jump source is required");
  double total = 0.0;
  for (const auto& s : sources) {
    require(s.r >= 0.0 && s.r < 1.0, "source r must lie in [0, 1)");
    require(in_unit(s.f), "source f must lie in [0, 1]");
    require(s.f == sources.front().f, "all sources must share the same race parameter f");
    total += s.r;
  }
  require(total < 1.0, "sum of source r must be below 1");
}

double MultiSourceParams::race() const { return sources.at(0).f; }

double MultiSourceParams::total_r() const {
  double total = 0.0;
  for (const auto& s : sources) total += s.r;
  return total;
}

std::optional<double> gain_imm_multi(const MultiSourceParams& mp, std::size_t j, double x, Liquidity depth) {
  mp.validate();
  if (j >= mp.sources.size()) throw std::out_of_range("source index out of range");
  if (!(x > 0.0)) throw std::domain_error("gain requires x > 0");
  const double noise_fill = depth.is_unbounded() ? 0.0 : mp.volume.survival(depth.value());
  double denom = (1.0 - mp.total_r()) * noise_fill;
  double loss = 0.0;
  for (std::size_t i = 0; i < mp.sources.size(); ++i) {
    const auto& s = mp.sources[i];
    const double w = (i == j ? s.f : 1.0) * s.r;
    denom += w * s.jump.survival(x);
    loss += w * s.jump.tail_expectation(x);
  }
  if (!(denom > 0.0)) return std::nullopt;
  return x - loss / denom;
}

namespace {

// Break-even tail for the maker specialised on source `k`; k == npos gives
// the noise maker, who loses every race.
double multi_tail(const MultiSourceParams& mp, std::size_t k, double x) {
  if (!(x > 0.0)) return kInf;
  const double denom = 1.0 - mp.total_r();
  double acc = 0.0;
  for (std::size_t i = 0; i < mp.sources.size(); ++i) {
    const auto& s = mp.sources[i];
    const double w = i == k ? s.f : 1.0;
    acc += w * s.r / denom * s.jump.emax_excess(x);
  }
  return acc;
}

}  // namespace

BookShape shape_multi(const MultiSourceParams& mp, std::span<const double> x_grid) {
  mp.validate();
  const std::size_t n = mp.sources.size();
  BookShape out;
  out.grid.assign(x_grid.begin(), x_grid.end());
  out.sources.assign(n, {});
  for (double x : x_grid) {
    double best = kInf;
    for (std::size_t k = 0; k < n; ++k) {
      const double tail = multi_tail(mp, k, x);
      best = std::min(best, tail);
      out.sources[k].push_back(depth_at_tail(mp.volume, tail));
    }
    out.noise.push_back(depth_at_tail(mp.volume, multi_tail(mp, static_cast<std::size_t>(-1), x)));
    const Liquidity visible = depth_at_tail(mp.volume, best);
    out.informed.push_back(visible);
    out.effective.push_back(visible);
  }
  return out;
}

}  // namespace lobeq
