#include "lobeq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <list>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace lobeq {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double exp_draw(Rng& rng, double rate) { return -std::log(uniform_open01(rng)) / rate; }

bool nondecreasing(const std::vector<Liquidity>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].value() < v[i - 1].value()) return false;
  }
  return true;
}

// Depths one side of the book shows to an incoming event.
struct SideBook {
  std::vector<double> distance;
  std::vector<Liquidity> informed;
  std::vector<Liquidity> noise;
  std::vector<Liquidity> effective;

  std::size_t size() const { return distance.size(); }
};

SideBook from_shape(const BookShape& s) {
  SideBook b;
  b.distance = s.grid;
  b.informed = s.informed;
  b.noise = s.noise;
  b.effective = s.effective;
  if (b.effective.size() != b.size()) {
    b.effective.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      b.effective.push_back(b.informed[i].value() >= b.noise[i].value() ? b.informed[i] : b.noise[i]);
    }
  }
  return b;
}

// Produces the book for a given grid offset, caching the last two offsets
// (one per side in tracking mode).
class BookSource {
 public:
  explicit BookSource(const SimConfig& cfg) : cfg_(cfg) {
    const ModelParams& p = cfg.params;
    if (const auto* user = std::get_if<BookShape>(&cfg.book)) user_ = from_shape(*user);
    if (p.tick > 0.0) {
      if (!user_) edges_ = half_spreads(p);
      fixed_ = build(p.offset_d);
    } else {
      fixed_ = user_ ? *user_ : from_shape(shape_toxic(p, cfg.probe_grid));
    }
  }

  const SideBook& fixed() const { return fixed_; }

  const SideBook& at(double offset) {
    for (auto& slot : cache_) {
      if (slot.first && *slot.first == offset) return slot.second;
    }
    auto& slot = cache_[next_];
    next_ ^= 1;
    slot.first = offset;
    slot.second = build(offset);
    return slot.second;
  }

 private:
  SideBook build(double offset) const {
    const ModelParams& p = cfg_.params;
    if (user_) {
      SideBook b = *user_;
      for (std::size_t i = 0; i < b.size(); ++i) b.distance[i] = offset + static_cast<double>(i) * p.tick;
      return b;
    }
    ModelParams q = p;
    q.offset_d = offset;
    return from_shape(shape_tick(q, cfg_.n_levels, *edges_));
  }

  const SimConfig& cfg_;
  std::optional<SideBook> user_;
  std::optional<HalfSpreads> edges_;
  SideBook fixed_;
  std::pair<std::optional<double>, SideBook> cache_[2];
  int next_ = 0;
};

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double distance = 0.0;

  void add(double v, double x) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
    distance += (x - distance) / static_cast<double>(n);
  }
};

// Integer order book mirroring what the MBO log describes. Every emitted
// row is applied here and followed by a top-of-book snapshot.
class LogBook {
 public:
  LogBook(double tick, std::vector<MboEvent>& rows, std::vector<BookState>& quotes)
      : tick_(tick), per_unit_(std::round(1.0 / tick)), rows_(rows), quotes_(quotes) {
    // Dividing by an integral ticks-per-unit gives the correctly rounded
    // decimal price (9999 / 100 is 99.99, 9999 * 0.01 is not).
    if (std::abs(per_unit_ * tick - 1.0) > 1e-12) per_unit_ = 0.0;
  }

  double price(std::int64_t ticks) const {
    return per_unit_ > 0.0 ? static_cast<double>(ticks) / per_unit_ : static_cast<double>(ticks) * tick_;
  }

  void add(std::int64_t ts, Side side, std::int64_t ticks, std::int64_t qty, Participant owner) {
    const std::uint64_t id = next_id_++;
    Level& level = levels(side)[ticks];
    level.orders.push_back({id, qty, owner});
    level.total += qty;
    index_[id] = {side, ticks, std::prev(level.orders.end())};
    owned_[{owner, side, ticks}] = id;
    emit({ts, id, Action::Add, side, price(ticks), qty, std::nullopt, owner});
  }

  void modify(std::int64_t ts, std::uint64_t id, std::int64_t qty) {
    Loc& loc = index_.at(id);
    Level& level = levels(loc.side)[loc.ticks];
    const Order o = *loc.it;
    level.total += qty - o.qty;
    if (qty > o.qty) {
      // A size increase loses time priority.
      level.orders.erase(loc.it);
      level.orders.push_back({o.id, qty, o.owner});
      loc.it = std::prev(level.orders.end());
    } else {
      loc.it->qty = qty;
    }
    emit({ts, id, Action::Modify, loc.side, price(loc.ticks), qty, std::nullopt, o.owner});
  }

  void cancel(std::int64_t ts, std::uint64_t id) {
    const Loc loc = index_.at(id);
    const Order o = *loc.it;
    remove(loc);
    emit({ts, id, Action::Cancel, loc.side, price(loc.ticks), o.qty, std::nullopt, o.owner});
  }

  /// Executes resting volume from the best price outward: every level up to
  /// `last_ticks` (inclusive, in the side's direction) and at most `max_qty`.
  /// Returns executed lots per price.
  std::vector<std::pair<std::int64_t, std::int64_t>> sweep(std::int64_t ts, Side side, std::int64_t last_ticks,
                                                            std::int64_t max_qty, Participant aggressor) {
    std::vector<std::pair<std::int64_t, std::int64_t>> hits;
    auto& book = levels(side);
    bool first = true;
    while (max_qty > 0 && !book.empty()) {
      auto lvl = side == Side::Ask ? book.begin() : std::prev(book.end());
      const std::int64_t ticks = lvl->first;
      if (side == Side::Ask ? ticks > last_ticks : ticks < last_ticks) break;
      std::int64_t done = 0;
      while (max_qty > 0 && !lvl->second.orders.empty()) {
        Order& front = lvl->second.orders.front();
        const std::int64_t q = std::min(front.qty, max_qty);
        const std::uint64_t id = front.id;
        max_qty -= q;
        done += q;
        const bool filled = q == front.qty;
        if (filled) {
          remove(index_.at(id));
        } else {
          front.qty -= q;
          lvl->second.total -= q;
        }
        emit({ts, id, Action::Execute, side, price(ticks), q, first, aggressor});
        first = false;
        if (filled && book.find(ticks) == book.end()) break;
      }
      hits.emplace_back(ticks, done);
      if (book.find(ticks) != book.end()) break;  // stopped inside the level
    }
    return hits;
  }

  /// Orders of `owner` on `side`, keyed by price in ticks.
  std::map<std::int64_t, std::uint64_t> owned(Participant owner, Side side) const {
    std::map<std::int64_t, std::uint64_t> out;
    for (auto it = owned_.lower_bound({owner, side, std::numeric_limits<std::int64_t>::min()});
         it != owned_.end() && std::get<0>(it->first) == owner && std::get<1>(it->first) == side; ++it) {
      out.emplace(std::get<2>(it->first), it->second);
    }
    return out;
  }

  std::int64_t qty_of(std::uint64_t id) const { return index_.at(id).it->qty; }

 private:
  struct Order {
    std::uint64_t id;
    std::int64_t qty;
    Participant owner;
  };
  struct Level {
    std::list<Order> orders;
    std::int64_t total = 0;
  };
  struct Loc {
    Side side;
    std::int64_t ticks;
    std::list<Order>::iterator it;
  };

  std::map<std::int64_t, Level>& levels(Side s) { return s == Side::Bid ? bids_ : asks_; }

  void remove(const Loc& loc) {
    auto& book = levels(loc.side);
    auto lvl = book.find(loc.ticks);
    const Order o = *loc.it;
    lvl->second.total -= o.qty;
    lvl->second.orders.erase(loc.it);
    if (lvl->second.orders.empty()) book.erase(lvl);
    owned_.erase({o.owner, loc.side, loc.ticks});
    index_.erase(o.id);
  }

  void emit(const MboEvent& e) {
    rows_.push_back(e);
    BookState s;
    s.ts_ns = e.ts_ns;
    if (!bids_.empty()) {
      const auto& best = *bids_.rbegin();
      s.bid = price(best.first);
      s.bid_qty = best.second.total;
    }
    if (!asks_.empty()) {
      const auto& best = *asks_.begin();
      s.ask = price(best.first);
      s.ask_qty = best.second.total;
    }
    quotes_.push_back(s);
  }

  double tick_;
  double per_unit_;
  std::vector<MboEvent>& rows_;
  std::vector<BookState>& quotes_;
  std::map<std::int64_t, Level> bids_;
  std::map<std::int64_t, Level> asks_;
  std::unordered_map<std::uint64_t, Loc> index_;
  std::map<std::tuple<Participant, Side, std::int64_t>, std::uint64_t> owned_;
  std::uint64_t next_id_ = 1;
};

// Grid position of the efficient price: first ask/bid tick and the offsets.
struct GridPos {
  std::int64_t ask_ticks;
  std::int64_t bid_ticks;
  double ask_offset;
  double bid_offset;
};

double clamp_offset(double d, double tick) { return std::clamp(d, 0.0, std::nextafter(tick, 0.0)); }

GridPos grid_position(double price, double tick) {
  GridPos g;
  g.ask_ticks = static_cast<std::int64_t>(std::ceil(price / tick));
  g.bid_ticks = static_cast<std::int64_t>(std::floor(price / tick));
  g.ask_offset = clamp_offset(static_cast<double>(g.ask_ticks) * tick - price, tick);
  g.bid_offset = clamp_offset(price - static_cast<double>(g.bid_ticks) * tick, tick);
  return g;
}

struct DesiredLevel {
  std::int64_t imm = 0;
  std::int64_t nmm = 0;
};

// Integer lots per level for one side. The effective cumulative book is
// rounded; the NMM owns its own increment where it fits and the IMM the rest.
std::vector<DesiredLevel> desired_lots(const SideBook& b, double scale) {
  std::vector<DesiredLevel> out(b.size());
  std::int64_t prev_eff = 0;
  std::int64_t prev_noise = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.effective[i].is_unbounded() || b.noise[i].is_unbounded()) {
      throw std::runtime_error("MBO logs need finite depth at every level; this book is unbounded");
    }
    const std::int64_t eff = std::max<std::int64_t>(prev_eff, std::llround(b.effective[i].value() * scale));
    const std::int64_t noise = std::min(eff, std::max<std::int64_t>(prev_noise, std::llround(b.noise[i].value() * scale)));
    const std::int64_t level = eff - prev_eff;
    out[i].nmm = std::min(level, std::max<std::int64_t>(0, noise - prev_noise));
    out[i].imm = level - out[i].nmm;
    prev_eff = eff;
    prev_noise = noise;
  }
  return out;
}

}  // namespace

// ----------------------------------------------------------------- config

void SimConfig::validate() const {
  params.validate();
  const bool tick = params.tick > 0.0;
  if (const auto* user = std::get_if<BookShape>(&book)) {
    const std::size_t n = user->grid.size();
    require(n > 0, "supplied book has no levels");
    require(user->informed.size() == n && user->noise.size() == n, "supplied book columns differ in length");
    require(user->effective.empty() || user->effective.size() == n, "supplied book columns differ in length");
    for (std::size_t i = 0; i < n; ++i) {
      require(user->grid[i] >= 0.0 && (i == 0 || user->grid[i] > user->grid[i - 1]),
              "supplied book distances must be nonnegative and increasing");
    }
    require(nondecreasing(user->informed) && nondecreasing(user->noise) &&
                (user->effective.empty() || nondecreasing(user->effective)),
            "supplied book has a decreasing cumulative depth");
  } else if (tick) {
    require(n_levels >= 1, "n_levels must be positive");
  } else {
    require(!probe_grid.empty(), "continuous prices need a probe grid");
    for (double x : probe_grid) require(x > 0.0, "probe distances must be positive");
  }
  if (record_log) {
    require(tick, "MBO logs need a tick grid");
    require(offset_mode == OffsetMode::Tracking, "MBO logs need the tracking offset mode");
    require(log.qty_scale > 0.0 && std::isfinite(log.qty_scale), "qty_scale must be positive");
    require(log.imm_latency_ns >= 0 && log.nmm_latency_ns >= 0, "latencies must be nonnegative");
  }
  require(log.event_rate > 0.0, "event_rate must be positive");
}

std::string_view to_string(EventKind k) { return k == EventKind::Jump ? "Jump" : "NoiseTrade"; }
std::string_view to_string(MakerType m) { return m == MakerType::Informed ? "IMM" : "NMM"; }

double SimSummary::jump_fraction() const {
  return n_events ? static_cast<double>(n_jumps) / static_cast<double>(n_events) : 0.0;
}
double SimSummary::race_win_fraction() const {
  return n_jumps ? static_cast<double>(n_it_wins) / static_cast<double>(n_jumps) : 0.0;
}
double SimSummary::sign_persistence() const {
  return n_sign_pairs ? static_cast<double>(n_sign_repeats) / static_cast<double>(n_sign_pairs) : 0.0;
}

// -------------------------------------------------------------------- run

SimResult run(const SimConfig& cfg) {
  cfg.validate();
  const ModelParams& p = cfg.params;
  const double tick = p.tick;
  const bool tracking = tick > 0.0 && cfg.offset_mode == OffsetMode::Tracking;
  const bool keep_events = cfg.record_events || cfg.record_log;
  const double rate = p.lambda_i > 0.0 && p.lambda_u > 0.0 ? p.lambda_i + p.lambda_u : cfg.log.event_rate;
  const double gamma = p.gamma();
  const double scale = cfg.log.qty_scale;

  BookSource books(cfg);
  const std::size_t n_levels = books.fixed().size();
  std::vector<Welford> stats[2] = {std::vector<Welford>(n_levels), std::vector<Welford>(n_levels)};

  SimResult out;
  std::vector<MboEvent> rows;
  LogBook lob(tick > 0.0 ? tick : 1.0, rows, out.quotes);

  Rng rng(cfg.seed);
  int prev_sign = uniform_open01(rng) < 0.5 ? 1 : -1;
  double price = cfg.log.p0;
  double t_next = exp_draw(rng, rate);

  auto to_ns = [](double t) { return static_cast<std::int64_t>(std::llround(t * 1e9)); };

  // Brings each maker's resting orders to the book implied by `price`.
  auto replenish = [&](std::int64_t ts_imm, std::int64_t ts_nmm) {
    const GridPos g = grid_position(price, tick);
    const std::vector<DesiredLevel> want[2] = {desired_lots(books.at(g.bid_offset), scale),
                                               desired_lots(books.at(g.ask_offset), scale)};
    for (Participant owner : {Participant::IMM, Participant::NMM}) {
      const std::int64_t ts = owner == Participant::IMM ? ts_imm : ts_nmm;
      for (Side side : {Side::Bid, Side::Ask}) {
        const auto& levels = want[side == Side::Ask];
        std::map<std::int64_t, std::int64_t> target;
        for (std::size_t i = 0; i < levels.size(); ++i) {
          const std::int64_t lots = owner == Participant::IMM ? levels[i].imm : levels[i].nmm;
          if (lots == 0) continue;
          const auto k = static_cast<std::int64_t>(i);
          target[side == Side::Ask ? g.ask_ticks + k : g.bid_ticks - k] = lots;
        }
        const auto current = lob.owned(owner, side);
        for (const auto& [ticks, id] : current) {
          if (!target.count(ticks)) lob.cancel(ts, id);
        }
        for (const auto& [ticks, id] : current) {
          auto it = target.find(ticks);
          if (it != target.end() && lob.qty_of(id) != it->second) lob.modify(ts, id, it->second);
        }
        for (const auto& [ticks, lots] : target) {
          if (!current.count(ticks)) lob.add(ts, side, ticks, lots, owner);
        }
      }
    }
  };

  // An empty run logs nothing, not even the opening book.
  if (cfg.record_log && cfg.n_events > 0) replenish(0, 0);

  for (std::uint64_t n = 0; n < cfg.n_events; ++n) {
    const double t = t_next;
    t_next = t + exp_draw(rng, rate);
    SimEvent ev;
    ev.t = t;

    double ask_offset = p.offset_d;
    double bid_offset = p.offset_d;
    GridPos g{};
    if (tracking) {
      g = grid_position(price, tick);
      ask_offset = g.ask_offset;
      bid_offset = g.bid_offset;
    }

    const bool jump = uniform_open01(rng) < p.r;
    ++out.summary.n_events;
    if (jump) {
      ++out.summary.n_jumps;
      const int side = uniform_open01(rng) < 0.5 ? 1 : -1;
      const double b = p.jump.sample(rng);
      const bool it_wins = uniform_open01(rng) < p.f;
      if (it_wins) ++out.summary.n_it_wins;
      ev.kind = EventKind::Jump;
      ev.side = side;
      ev.size = b;
      ev.race_won_by = it_wins ? Participant::IT : Participant::IMM;

      const SideBook& book = tracking ? books.at(side > 0 ? ask_offset : bid_offset) : books.fixed();
      const auto& swept = it_wins ? book.effective : book.noise;
      double prev_cum = 0.0;
      for (std::size_t i = 0; i < book.size(); ++i) {
        const double x = book.distance[i];
        if (!(x < b)) break;
        if (it_wins && !book.informed[i].is_empty()) stats[0][i].add(x - b, x);
        if (!book.noise[i].is_empty()) stats[1][i].add(x - b, x);
        if (!cfg.record_log) {
          if (swept[i].is_unbounded()) throw std::runtime_error("the informed trader cannot sweep unbounded depth");
          const double vol = swept[i].value() - prev_cum;
          prev_cum = swept[i].value();
          if (vol > 0.0) ev.executed_per_level.emplace_back(static_cast<int>(i) + 1, vol);
        }
      }

      if (cfg.record_log) {
        const std::int64_t ts = to_ns(t);
        const Side s = side > 0 ? Side::Ask : Side::Bid;
        // Last level strictly inside the jump.
        std::int64_t inside = -1;
        for (std::size_t i = 0; i < book.size() && book.distance[i] < b; ++i) inside = static_cast<std::int64_t>(i);
        if (inside >= 0) {
          const std::int64_t first = side > 0 ? g.ask_ticks : g.bid_ticks;
          const std::int64_t last = side > 0 ? first + inside : first - inside;
          if (!it_wins) {
            for (const auto& [ticks, id] : lob.owned(Participant::IMM, s)) {
              if (side > 0 ? ticks <= last : ticks >= last) lob.cancel(ts, id);
            }
          }
          const auto hits = lob.sweep(ts, s, last, std::numeric_limits<std::int64_t>::max(), Participant::IT);
          for (const auto& [ticks, lots] : hits) {
            const auto level = static_cast<int>(side > 0 ? ticks - first : first - ticks) + 1;
            ev.executed_per_level.emplace_back(level, static_cast<double>(lots) / scale);
          }
        }
      }
      price += side * b;
    } else {
      ++out.summary.n_noise;
      const int sign = uniform_open01(rng) < gamma ? prev_sign : -prev_sign;
      const double q = std::max(0.0, p.volume.sample(rng));
      ++out.summary.n_sign_pairs;
      if (sign == prev_sign) ++out.summary.n_sign_repeats;
      const double drift = p.theta * (sign - p.rho * prev_sign);
      prev_sign = sign;
      ev.kind = EventKind::NoiseTrade;
      ev.side = sign;
      ev.size = q;

      const SideBook& book = tracking ? books.at(sign > 0 ? ask_offset : bid_offset) : books.fixed();
      if (q > 0.0) {
        for (std::size_t i = 0; i < book.size(); ++i) {
          const double x = book.distance[i];
          const double pnl = x - sign * drift;
          if (!book.informed[i].is_empty() && book.informed[i].value() < q) stats[0][i].add(pnl, x);
          if (!book.noise[i].is_empty() && book.noise[i].value() < q) stats[1][i].add(pnl, x);
        }
        if (cfg.record_log) {
          const std::int64_t lots = std::llround(q * scale);
          if (lots > 0) {
            const Side s = sign > 0 ? Side::Ask : Side::Bid;
            const std::int64_t first = sign > 0 ? g.ask_ticks : g.bid_ticks;
            const std::int64_t beyond = sign > 0 ? std::numeric_limits<std::int64_t>::max()
                                                 : std::numeric_limits<std::int64_t>::min();
            for (const auto& [ticks, done] : lob.sweep(to_ns(t), s, beyond, lots, Participant::NT)) {
              const auto level = static_cast<int>(sign > 0 ? ticks - first : first - ticks) + 1;
              ev.executed_per_level.emplace_back(level, static_cast<double>(done) / scale);
            }
          }
        } else {
          double prev_cum = 0.0;
          for (std::size_t i = 0; i < book.size(); ++i) {
            const double cum = std::min(book.effective[i].value(), q);
            if (cum > prev_cum) ev.executed_per_level.emplace_back(static_cast<int>(i) + 1, cum - prev_cum);
            prev_cum = cum;
            if (cum >= q) break;
          }
        }
      }
      price += drift;
    }

    for (const auto& [level, vol] : ev.executed_per_level) out.summary.total_executed += vol;
    ev.price_after = price;

    if (cfg.record_log) {
      const std::int64_t ts = to_ns(t);
      const std::int64_t cap = std::max(ts, to_ns(t_next));
      replenish(std::min(ts + cfg.log.imm_latency_ns, cap), std::min(ts + cfg.log.nmm_latency_ns, cap));
    }
    if (keep_events) out.events.push_back(std::move(ev));
  }

  // Per-level tables. Populated means the maker quoted volume there in the
  // reference book, or was sampled at least once in tracking mode.
  const SideBook& ref = books.fixed();
  for (int m = 0; m < 2; ++m) {
    const auto& depth = m == 0 ? ref.informed : ref.noise;
    for (std::size_t i = 0; i < n_levels; ++i) {
      const Welford& w = stats[m][i];
      LevelPnl row;
      row.maker = m == 0 ? MakerType::Informed : MakerType::Noise;
      row.level = static_cast<int>(i) + 1;
      row.distance = w.n ? w.distance : ref.distance[i];
      row.n_fills = w.n;
      row.mean_gain = w.mean;
      row.std_err = w.n >= 2 ? std::sqrt(w.m2 / static_cast<double>(w.n - 1)) / std::sqrt(static_cast<double>(w.n)) : 0.0;
      row.populated = !depth[i].is_empty() || (tracking && w.n > 0);
      out.pnl.push_back(row);
    }
  }

  if (cfg.record_log) out.log = std::move(rows);
  return out;
}

std::vector<MboEvent> export_mbo(const SimResult& result) {
  if (!result.log) throw std::invalid_argument("export_mbo needs a run with record_log = true");
  return *result.log;
}

// ------------------------------------------------------------- price path

PricePath simulate_price_path(const ModelParams& p, double horizon, std::uint64_t seed, double p0) {
  p.validate();
  require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
  require(p.lambda_i > 0.0 || p.lambda_u > 0.0, "at least one intensity must be positive");
  constexpr double kNever = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  PricePath path;
  path.p0 = p0;
  double price = p0;
  int prev_sign = uniform_open01(rng) < 0.5 ? 1 : -1;
  double next_jump = p.lambda_i > 0.0 ? exp_draw(rng, p.lambda_i) : kNever;
  double next_noise = p.lambda_u > 0.0 ? exp_draw(rng, p.lambda_u) : kNever;
  const double gamma = p.gamma();

  while (true) {
    const bool jump = next_jump <= next_noise;
    const double t = jump ? next_jump : next_noise;
    if (t > horizon) break;
    PricePoint pt;
    pt.t = t;
    if (jump) {
      pt.kind = EventKind::Jump;
      pt.sign = uniform_open01(rng) < 0.5 ? 1 : -1;
      price += pt.sign * p.jump.sample(rng);
      next_jump += exp_draw(rng, p.lambda_i);
    } else {
      pt.kind = EventKind::NoiseTrade;
      pt.sign = uniform_open01(rng) < gamma ? prev_sign : -prev_sign;
      price += p.theta * (pt.sign - p.rho * prev_sign);
      prev_sign = pt.sign;
      next_noise += exp_draw(rng, p.lambda_u);
    }
    pt.price = price;
    path.points.push_back(pt);
  }
  return path;
}

}  // namespace lobeq
