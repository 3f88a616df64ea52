#pragma once

#include "lobeq/mbo.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lobeq {

/// (bid * V_a + ask * V_b) / (V_a + V_b). Throws when both volumes are 0.
double micro_price(double bid, double ask, double vb, double va);
double mid_price(double bid, double ask);

/// Micro and Mid are reference series; Touched is the quote on the side a
/// trade hits (ask for buys, bid for sells).
enum class Reference { Micro, Mid, Touched };
std::string_view to_string(Reference r);

enum class TradeRole { Aggressive, Passive };
std::string_view to_string(TradeRole r);

/// One executed trade, seen from the aggressor (one record per incoming
/// order, possibly spanning several Execute rows) or from a resting order
/// (one record per fill).
struct TradeRecord {
  TradeRole role = TradeRole::Aggressive;
  std::int64_t t = 0;            ///< ns
  std::size_t event_index = 0;   ///< first Execute row of the trade
  double q = 0.0;                ///< signed volume, positive = buyer-initiated
  double price = 0.0;            ///< VWAP for aggressive records, fill price otherwise
  std::optional<Participant> label;       ///< aggressor or resting owner
  std::optional<std::size_t> lifecycle;   ///< resting order, passive only

  std::optional<std::int64_t> trade_to_trade_ns;  ///< aggressive
  std::optional<double> volume_ratio;             ///< aggressive, in (0, 1]
  std::optional<std::int64_t> trade_to_add_ns;    ///< passive
  std::optional<std::int64_t> add_to_add_ns;      ///< passive
  std::optional<int> update_count;                ///< passive
};

struct TradeTape {
  std::vector<TradeRecord> aggressive;
  std::vector<TradeRecord> passive;
};

/// Builds both tapes. Execute rows flagged as aggressor open a new trade;
/// unflagged feeds group consecutive rows with equal ts and side.
TradeTape build_trade_records(std::span<const MboEvent> events, const Reconstruction& rec);

/// Reference prices derived from the replayed book. Horizon lookups take
/// the last valid value at or before t + k; at k = 0 the trade's own rows
/// are excluded so the value is the pre-trade quote.
class ReferenceSeries {
 public:
  ReferenceSeries(std::span<const MboEvent> events, const Reconstruction& rec, Reference kind);

  Reference kind() const noexcept { return kind_; }
  std::optional<double> lookup(const TradeRecord& trade, std::int64_t k_ns) const;

 private:
  std::optional<double> value_at(std::size_t state, int trade_sign) const;

  Reference kind_;
  std::vector<std::int64_t> ts_;
  std::vector<BookState> states_;
  // Last state index (<= i) whose value is defined, per side use.
  std::vector<std::ptrdiff_t> last_two_sided_;
  std::vector<std::ptrdiff_t> last_bid_;
  std::vector<std::ptrdiff_t> last_ask_;
};

/// eps * sum(Q (X - P)) / sum(|Q|).
double signature_value(std::span<const double> q, std::span<const double> p, std::span<const double> x, int eps);

/// ST(k) over `trades`; throws std::runtime_error naming the first trade
/// without a reference value, std::invalid_argument on an empty set.
double trade_signature(std::span<const TradeRecord> trades, std::int64_t k_ns, int eps, const ReferenceSeries& ref);

/// +1 for aggressive records, -1 for passive ones.
int default_eps(TradeRole role);

// ----------------------------------------------------------- clustering

enum class ClusterMetric { TradeToAdd, AddToAdd, TradeToTrade, VolumeRatio, UpdateCount };
std::string_view to_string(ClusterMetric m);
std::optional<ClusterMetric> parse_cluster_metric(std::string_view s);

struct ClusterSpec {
  ClusterMetric metric = ClusterMetric::TradeToAdd;
  std::vector<double> thresholds;  ///< strictly increasing
  TradeRole side = TradeRole::Passive;

  /// Throws std::invalid_argument on bad thresholds or metric/side mismatch.
  void validate() const;
  std::size_t n_clusters() const { return thresholds.size() + 1; }
};

/// The metric a spec reads from a record, nullopt when undefined.
std::optional<double> metric_value(const TradeRecord& r, ClusterMetric m);

/// Cluster of a metric value. Index 0 is the most informed bucket: the
/// smallest durations, the largest volume ratios and update counts. A value
/// equal to a threshold falls in the bucket above it.
std::size_t cluster_of(double value, const ClusterSpec& spec);

/// Cluster per record; nullopt is the undefined bucket.
std::vector<std::optional<std::size_t>> classify(std::span<const TradeRecord> records, const ClusterSpec& spec);

struct SignaturePoint {
  double value = 0.0;
  double std_err = 0.0;  ///< bootstrap, 0 when not requested
};

struct SignatureCurve {
  Reference reference = Reference::Micro;
  std::vector<std::int64_t> horizons;          ///< ns
  std::vector<std::vector<SignaturePoint>> values;  ///< [cluster][horizon]
  std::vector<std::size_t> counts;             ///< trades per cluster
  std::size_t n_undefined = 0;
};

struct BootstrapOptions {
  int n_resamples = 0;  ///< 0 disables the standard errors
  std::uint64_t seed = 0;
};

/// Signature of `trades` at each horizon with optional bootstrap errors
/// (trades resampled with replacement).
std::vector<SignaturePoint> signature_series(std::span<const TradeRecord> trades, std::span<const std::int64_t> horizons,
                                             int eps, const ReferenceSeries& ref, const BootstrapOptions& boot = {});

/// One curve per cluster of `spec`, over the tape matching spec.side.
/// Empty clusters report zero values.
SignatureCurve cluster_signatures(const TradeTape& tape, const ClusterSpec& spec, std::span<const std::int64_t> horizons,
                                  const ReferenceSeries& ref, const BootstrapOptions& boot = {});

/// Records with a reference value at every horizon. Trades too close to
/// the start or end of the feed drop out, keeping counts horizon-free.
std::vector<TradeRecord> with_reference(std::span<const TradeRecord> records, std::span<const std::int64_t> horizons,
                                        const ReferenceSeries& ref);

/// Records of `role` whose label equals `label`.
std::vector<TradeRecord> select_label(const TradeTape& tape, TradeRole role, Participant label);

}  // namespace lobeq
