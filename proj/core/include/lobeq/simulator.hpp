#pragma once

#include "lobeq/dist.hpp"
#include "lobeq/equilibrium.hpp"
#include "lobeq/mbo.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lobeq {

/// Book reset to the closed-form equilibrium shape after every event.
struct EquilibriumBook {};
/// Book reset to a caller-supplied shape after every event.
using BookMode = std::variant<EquilibriumBook, BookShape>;

/// Fixed: every event sees the book at the configured offset_d.
/// Tracking: the efficient price is carried across events and each side's
/// grid offset follows it (tick grids only; required for MBO logs).
enum class OffsetMode { Fixed, Tracking };

struct LogOptions {
  double p0 = 100.0;                    ///< initial efficient price
  double qty_scale = 100.0;             ///< integer lots per unit of model volume
  double event_rate = 1000.0;           ///< events per second when intensities are unset
  std::int64_t imm_latency_ns = 1'000;  ///< IMM replenishment delay
  std::int64_t nmm_latency_ns = 100'000;
};

struct SimConfig {
  ModelParams params;
  std::uint64_t n_events = 0;
  std::uint64_t seed = 0;
  BookMode book = EquilibriumBook{};
  bool record_log = false;
  bool record_events = false;  ///< keep SimEvent records (implied by record_log)
  OffsetMode offset_mode = OffsetMode::Fixed;
  int n_levels = 10;                ///< tick grids: levels per side
  std::vector<double> probe_grid{};  ///< continuous prices: probe distances
  LogOptions log{};

  /// Throws std::invalid_argument on any inconsistency.
  void validate() const;
};

enum class EventKind { Jump, NoiseTrade };
enum class MakerType { Informed, Noise };

std::string_view to_string(EventKind k);
std::string_view to_string(MakerType m);

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::Jump;
  int side = 1;       ///< +1 up jump / buy trade (hits the ask), -1 otherwise
  double size = 0.0;  ///< jump magnitude B, or traded volume (positive part of Q^u)
  std::optional<Participant> race_won_by;  ///< IT or IMM, jumps only
  /// 1-based level on the hit side and the volume executed there.
  std::vector<std::pair<int, double>> executed_per_level;
  double price_after = 0.0;  ///< efficient price after the event
};

/// Marginal-order P&L at one level, marked to the post-event efficient price.
struct LevelPnl {
  MakerType maker = MakerType::Informed;
  int level = 0;          ///< 1-based
  double distance = 0.0;  ///< mean price distance over fills
  std::uint64_t n_fills = 0;
  double mean_gain = 0.0;
  double std_err = 0.0;  ///< sample std / sqrt(n_fills); 0 below two fills
  bool populated = false;  ///< the maker's book held volume at this level
};

struct SimSummary {
  std::uint64_t n_events = 0;
  std::uint64_t n_jumps = 0;
  std::uint64_t n_it_wins = 0;
  std::uint64_t n_noise = 0;
  std::uint64_t n_sign_pairs = 0;
  std::uint64_t n_sign_repeats = 0;
  double total_executed = 0.0;

  double jump_fraction() const;
  double race_win_fraction() const;
  double sign_persistence() const;
};

struct SimResult {
  std::vector<LevelPnl> pnl;  ///< informed levels first, then noise levels
  SimSummary summary;
  std::vector<SimEvent> events;        ///< when record_events or record_log
  std::optional<std::vector<MboEvent>> log;
  std::vector<BookState> quotes;       ///< top of book after each log row
};

/// Runs the embedded event chain. Deterministic given the seed.
SimResult run(const SimConfig& cfg);

/// The labeled MBO log of a run; requires record_log.
std::vector<MboEvent> export_mbo(const SimResult& result);

struct PricePoint {
  double t = 0.0;
  double price = 0.0;
  EventKind kind = EventKind::Jump;
  int sign = 0;
};

/// Piecewise-constant efficient price driven by independent Poisson clocks.
struct PricePath {
  double p0 = 0.0;
  std::vector<PricePoint> points;  ///< price right after each event
  double terminal() const { return points.empty() ? p0 : points.back().price; }
};

/// Needs lambda_i and lambda_u; lambda_i = 0 switches jumps off.
PricePath simulate_price_path(const ModelParams& p, double horizon, std::uint64_t seed, double p0 = 100.0);

}  // namespace lobeq
