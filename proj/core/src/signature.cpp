#include "lobeq/signature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "lobeq/dist.hpp"

namespace lobeq {

double micro_price(double bid, double ask, double vb, double va) {
  if (!(bid < ask)) throw std::domain_error("micro_price needs bid < ask");
  if (!(vb >= 0.0 && va >= 0.0)) throw std::domain_error("micro_price needs nonnegative volumes");
  if (vb == 0.0 && va == 0.0) throw std::domain_error("micro_price is undefined when both queues are empty");
  // Clamped: the weighted mean can round one ulp outside the quotes.
  return std::clamp((bid * va + ask * vb) / (va + vb), bid, ask);
}

double mid_price(double bid, double ask) {
  if (!(bid < ask)) throw std::domain_error("mid_price needs bid < ask");
  return 0.5 * (bid + ask);
}

std::string_view to_string(Reference r) {
  switch (r) {
    case Reference::Micro: return "micro";
    case Reference::Mid: return "mid";
    case Reference::Touched: return "touched";
  }
  return "?";
}

std::string_view to_string(TradeRole r) { return r == TradeRole::Aggressive ? "aggressive" : "passive"; }

int default_eps(TradeRole role) { return role == TradeRole::Aggressive ? 1 : -1; }

// ----------------------------------------------------------------- tapes

TradeTape build_trade_records(std::span<const MboEvent> events, const Reconstruction& rec) {
  if (rec.states.size() != events.size()) throw std::invalid_argument("reconstruction does not match the events");
  TradeTape tape;

  struct Group {
    TradeRecord rec;
    double notional = 0.0;
    double volume = 0.0;
    double best_price = 0.0;
    double at_best = 0.0;
    Side side = Side::Ask;
  };
  std::optional<Group> open;
  std::optional<std::int64_t> last_trade_ts;

  auto close = [&] {
    if (!open) return;
    Group& g = *open;
    g.rec.price = g.notional / g.volume;
    g.rec.q = g.side == Side::Ask ? g.volume : -g.volume;
    if (g.rec.event_index > 0) {
      const BookState& before = rec.states[g.rec.event_index - 1];
      const auto& best = g.side == Side::Ask ? before.ask : before.bid;
      const std::int64_t avail = g.side == Side::Ask ? before.ask_qty : before.bid_qty;
      if (best && *best == g.best_price && avail > 0) g.rec.volume_ratio = g.at_best / static_cast<double>(avail);
    }
    if (last_trade_ts) g.rec.trade_to_trade_ns = g.rec.t - *last_trade_ts;
    last_trade_ts = g.rec.t;
    tape.aggressive.push_back(std::move(g.rec));
    open.reset();
  };

  std::map<std::pair<Side, double>, std::int64_t> last_add_at_price;
  std::vector<std::optional<std::int64_t>> trade_to_add(rec.lifecycles.size());
  std::vector<std::optional<std::int64_t>> add_to_add(rec.lifecycles.size());
  std::vector<int> updates(rec.lifecycles.size(), 0);

  for (std::size_t i = 0; i < events.size(); ++i) {
    const MboEvent& e = events[i];
    if (e.action != Action::Execute) {
      close();
      if (e.action == Action::Modify) ++updates[rec.lifecycle_of_event[i]];
      if (e.action == Action::Add) {
        const std::size_t lc = rec.lifecycle_of_event[i];
        if (last_trade_ts) trade_to_add[lc] = e.ts_ns - *last_trade_ts;
        auto [it, fresh] = last_add_at_price.try_emplace({e.side, e.price}, e.ts_ns);
        if (!fresh) {
          add_to_add[lc] = e.ts_ns - it->second;
          it->second = e.ts_ns;
        }
      }
      continue;
    }

    const bool starts = e.aggressor ? *e.aggressor : (!open || open->rec.t != e.ts_ns || open->side != e.side);
    if (starts || !open) {
      close();
      Group g;
      g.rec.role = TradeRole::Aggressive;
      g.rec.t = e.ts_ns;
      g.rec.event_index = i;
      g.rec.label = e.label;
      g.side = e.side;
      g.best_price = e.price;
      open = std::move(g);
    }
    const auto qty = static_cast<double>(e.qty);
    open->notional += qty * e.price;
    open->volume += qty;
    if (e.price == open->best_price) open->at_best += qty;

    const std::size_t lc = rec.lifecycle_of_event[i];
    TradeRecord p;
    p.role = TradeRole::Passive;
    p.t = e.ts_ns;
    p.event_index = i;
    p.q = e.side == Side::Ask ? qty : -qty;
    p.price = e.price;
    p.label = rec.lifecycles[lc].label;
    p.lifecycle = lc;
    p.update_count = updates[lc];  // modifications before this fill
    tape.passive.push_back(p);
  }
  close();

  // Add-time metrics are known once the whole file is read.
  for (TradeRecord& p : tape.passive) {
    p.trade_to_add_ns = trade_to_add[*p.lifecycle];
    p.add_to_add_ns = add_to_add[*p.lifecycle];
  }
  return tape;
}

// ------------------------------------------------------------- reference

ReferenceSeries::ReferenceSeries(std::span<const MboEvent> events, const Reconstruction& rec, Reference kind)
    : kind_(kind), states_(rec.states) {
  if (rec.states.size() != events.size()) throw std::invalid_argument("reconstruction does not match the events");
  ts_.reserve(events.size());
  for (const MboEvent& e : events) ts_.push_back(e.ts_ns);
  std::ptrdiff_t two = -1, bid = -1, ask = -1;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const BookState& s = states_[i];
    if (s.bid && s.ask && *s.bid < *s.ask) two = static_cast<std::ptrdiff_t>(i);
    if (s.bid) bid = static_cast<std::ptrdiff_t>(i);
    if (s.ask) ask = static_cast<std::ptrdiff_t>(i);
    last_two_sided_.push_back(two);
    last_bid_.push_back(bid);
    last_ask_.push_back(ask);
  }
}

std::optional<double> ReferenceSeries::value_at(std::size_t state, int trade_sign) const {
  if (kind_ == Reference::Touched) {
    const std::ptrdiff_t j = trade_sign > 0 ? last_ask_[state] : last_bid_[state];
    if (j < 0) return std::nullopt;
    const BookState& s = states_[static_cast<std::size_t>(j)];
    return trade_sign > 0 ? *s.ask : *s.bid;
  }
  const std::ptrdiff_t j = last_two_sided_[state];
  if (j < 0) return std::nullopt;
  const BookState& s = states_[static_cast<std::size_t>(j)];
  if (kind_ == Reference::Mid) return mid_price(*s.bid, *s.ask);
  return micro_price(*s.bid, *s.ask, static_cast<double>(s.bid_qty), static_cast<double>(s.ask_qty));
}

std::optional<double> ReferenceSeries::lookup(const TradeRecord& trade, std::int64_t k_ns) const {
  if (k_ns < 0) throw std::invalid_argument("horizons must be nonnegative");
  if (ts_.empty()) return std::nullopt;
  const int sign = trade.q > 0.0 ? 1 : -1;
  if (k_ns == 0) {
    if (trade.event_index == 0 || trade.event_index > ts_.size()) return std::nullopt;
    return value_at(trade.event_index - 1, sign);
  }
  const std::int64_t target = trade.t + k_ns;
  if (target > ts_.back()) return std::nullopt;  // beyond the end of the feed
  const auto it = std::upper_bound(ts_.begin(), ts_.end(), target);
  if (it == ts_.begin()) return std::nullopt;
  return value_at(static_cast<std::size_t>(std::distance(ts_.begin(), it) - 1), sign);
}

// ------------------------------------------------------------- signatures

double signature_value(std::span<const double> q, std::span<const double> p, std::span<const double> x, int eps) {
  if (q.size() != p.size() || q.size() != x.size()) throw std::invalid_argument("signature inputs differ in length");
  if (q.empty()) throw std::invalid_argument("signature of an empty trade set");
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +1 or -1");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    num += q[i] * (x[i] - p[i]);
    den += std::abs(q[i]);
  }
  if (!(den > 0.0)) throw std::invalid_argument("signature needs nonzero traded volume");
  return eps * num / den;
}

namespace {

std::string describe(const TradeRecord& t) {
  return "trade at event " + std::to_string(t.event_index) + " (ts_ns " + std::to_string(t.t) + ")";
}

double reference_or_throw(const ReferenceSeries& ref, const TradeRecord& t, std::int64_t k) {
  const auto x = ref.lookup(t, k);
  if (!x) {
    throw std::runtime_error("no " + std::string(to_string(ref.kind())) + " reference at horizon " +
                             std::to_string(k) + " ns for " + describe(t));
  }
  return *x;
}

}  // namespace

double trade_signature(std::span<const TradeRecord> trades, std::int64_t k_ns, int eps, const ReferenceSeries& ref) {
  if (trades.empty()) throw std::invalid_argument("signature of an empty trade set");
  std::vector<double> q, p, x;
  q.reserve(trades.size());
  p.reserve(trades.size());
  x.reserve(trades.size());
  for (const TradeRecord& t : trades) {
    x.push_back(reference_or_throw(ref, t, k_ns));
    q.push_back(t.q);
    p.push_back(t.price);
  }
  return signature_value(q, p, x, eps);
}

std::vector<SignaturePoint> signature_series(std::span<const TradeRecord> trades, std::span<const std::int64_t> horizons,
                                             int eps, const ReferenceSeries& ref, const BootstrapOptions& boot) {
  if (trades.empty()) throw std::invalid_argument("signature of an empty trade set");
  const std::size_t n = trades.size();
  const std::size_t nh = horizons.size();
  // Per-trade numerator terms Q (X - P), one row per horizon.
  std::vector<std::vector<double>> terms(nh, std::vector<double>(n));
  std::vector<double> abs_q(n);
  for (std::size_t i = 0; i < n; ++i) {
    abs_q[i] = std::abs(trades[i].q);
    for (std::size_t h = 0; h < nh; ++h) {
      terms[h][i] = trades[i].q * (reference_or_throw(ref, trades[i], horizons[h]) - trades[i].price);
    }
  }

  std::vector<SignaturePoint> out(nh);
  double den = 0.0;
  for (double a : abs_q) den += a;
  if (!(den > 0.0)) throw std::invalid_argument("signature needs nonzero traded volume");
  for (std::size_t h = 0; h < nh; ++h) {
    double num = 0.0;
    for (double v : terms[h]) num += v;
    out[h].value = eps * num / den;
  }

  if (boot.n_resamples > 1) {
    Rng rng(boot.seed);
    std::vector<double> sum(nh, 0.0), sum2(nh, 0.0);
    std::vector<std::size_t> idx(n);
    for (int b = 0; b < boot.n_resamples; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        idx[i] = std::min(n - 1, static_cast<std::size_t>(uniform_open01(rng) * static_cast<double>(n)));
        d += abs_q[idx[i]];
      }
      for (std::size_t h = 0; h < nh; ++h) {
        double num = 0.0;
        for (std::size_t i : idx) num += terms[h][i];
        const double v = eps * num / d;
        sum[h] += v;
        sum2[h] += v * v;
      }
    }
    const double m = boot.n_resamples;
    for (std::size_t h = 0; h < nh; ++h) {
      const double mean = sum[h] / m;
      out[h].std_err = std::sqrt(std::max(0.0, (sum2[h] - m * mean * mean) / (m - 1.0)));
    }
  }
  return out;
}

// ------------------------------------------------------------- clustering

std::string_view to_string(ClusterMetric m) {
  switch (m) {
    case ClusterMetric::TradeToAdd: return "TradeToAdd";
    case ClusterMetric::AddToAdd: return "AddToAdd";
    case ClusterMetric::TradeToTrade: return "TradeToTrade";
    case ClusterMetric::VolumeRatio: return "VolumeRatio";
    case ClusterMetric::UpdateCount: return "UpdateCount";
  }
  return "?";
}

std::optional<ClusterMetric> parse_cluster_metric(std::string_view s) {
  for (ClusterMetric m : {ClusterMetric::TradeToAdd, ClusterMetric::AddToAdd, ClusterMetric::TradeToTrade,
                          ClusterMetric::VolumeRatio, ClusterMetric::UpdateCount}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

namespace {

TradeRole metric_side(ClusterMetric m) {
  return m == ClusterMetric::TradeToTrade || m == ClusterMetric::VolumeRatio ? TradeRole::Aggressive
                                                                            : TradeRole::Passive;
}

bool descending(ClusterMetric m) { return m == ClusterMetric::VolumeRatio || m == ClusterMetric::UpdateCount; }

}  // namespace

void ClusterSpec::validate() const {
  if (metric_side(metric) != side) {
    throw std::invalid_argument(std::string(to_string(metric)) + " is a " +
                                std::string(to_string(metric_side(metric))) + "-side metric");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!std::isfinite(thresholds[i])) throw std::invalid_argument("thresholds must be finite");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
  }
}

std::optional<double> metric_value(const TradeRecord& r, ClusterMetric m) {
  auto as_double = [](const auto& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  switch (m) {
    case ClusterMetric::TradeToAdd: return as_double(r.trade_to_add_ns);
    case ClusterMetric::AddToAdd: return as_double(r.add_to_add_ns);
    case ClusterMetric::TradeToTrade: return as_double(r.trade_to_trade_ns);
    case ClusterMetric::VolumeRatio: return r.volume_ratio;
    case ClusterMetric::UpdateCount: return as_double(r.update_count);
  }
  return std::nullopt;
}

std::size_t cluster_of(double value, const ClusterSpec& spec) {
  const auto& th = spec.thresholds;
  const auto above = static_cast<std::size_t>(std::upper_bound(th.begin(), th.end(), value) - th.begin());
  return descending(spec.metric) ? th.size() - above : above;
}

std::vector<std::optional<std::size_t>> classify(std::span<const TradeRecord> records, const ClusterSpec& spec) {
  spec.validate();
  std::vector<std::optional<std::size_t>> out;
  out.reserve(records.size());
  for (const TradeRecord& r : records) {
    if (r.role != spec.side) throw std::invalid_argument("record role does not match the cluster spec side");
    const auto v = metric_value(r, spec.metric);
    out.push_back(v ? std::optional<std::size_t>(cluster_of(*v, spec)) : std::nullopt);
  }
  return out;
}

SignatureCurve cluster_signatures(const TradeTape& tape, const ClusterSpec& spec, std::span<const std::int64_t> horizons,
                                  const ReferenceSeries& ref, const BootstrapOptions& boot) {
  const auto& records = spec.side == TradeRole::Aggressive ? tape.aggressive : tape.passive;
  const auto clusters = classify(records, spec);
  SignatureCurve curve;
  curve.reference = ref.kind();
  curve.horizons.assign(horizons.begin(), horizons.end());
  std::vector<std::vector<TradeRecord>> members(spec.n_clusters());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!clusters[i]) {
      ++curve.n_undefined;
      continue;
    }
    members[*clusters[i]].push_back(records[i]);
  }
  for (auto& m : members) m = with_reference(m, horizons, ref);
  const int eps = default_eps(spec.side);
  for (std::size_t c = 0; c < members.size(); ++c) {
    curve.counts.push_back(members[c].size());
    if (members[c].empty()) {
      curve.values.emplace_back(horizons.size());
    } else {
      BootstrapOptions b = boot;
      b.seed = boot.seed + c;
      curve.values.push_back(signature_series(members[c], horizons, eps, ref, b));
    }
  }
  return curve;
}

std::vector<TradeRecord> with_reference(std::span<const TradeRecord> records, std::span<const std::int64_t> horizons,
                                        const ReferenceSeries& ref) {
  std::vector<TradeRecord> out;
  for (const TradeRecord& r : records) {
    const bool covered =
        std::all_of(horizons.begin(), horizons.end(), [&](std::int64_t k) { return ref.lookup(r, k).has_value(); });
    if (covered) out.push_back(r);
  }
  return out;
}

std::vector<TradeRecord> select_label(const TradeTape& tape, TradeRole role, Participant label) {
  const auto& records = role == TradeRole::Aggressive ? tape.aggressive : tape.passive;
  std::vector<TradeRecord> out;
  for (const TradeRecord& r : records) {
    if (r.label == label) out.push_back(r);
  }
  return out;
}

}  // namespace lobeq
