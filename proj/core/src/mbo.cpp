#include "lobeq/mbo.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <list>
#include <map>
#include <ostream>
#include <unordered_map>

namespace lobeq {

std::string_view to_string(Participant p) {
  switch (p) {
    case Participant::IT: return "IT";
    case Participant::NT: return "NT";
    case Participant::IMM: return "IMM";
    case Participant::NMM: return "NMM";
  }
  return "?";
}

std::optional<Participant> parse_participant(std::string_view s) {
  if (s == "IT") return Participant::IT;
  if (s == "NT") return Participant::NT;
  if (s == "IMM") return Participant::IMM;
  if (s == "NMM") return Participant::NMM;
  return std::nullopt;
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Add: return "Add";
    case Action::Modify: return "Modify";
    case Action::Cancel: return "Cancel";
    case Action::Execute: return "Execute";
  }
  return "?";
}

std::string_view to_string(Side s) { return s == Side::Bid ? "Bid" : "Ask"; }

MboParseError::MboParseError(std::size_t row, std::string field, const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + (field.empty() ? "" : ", field '" + field + "'") + ": " +
                         what),
      row_(row),
      field_(std::move(field)) {}

namespace {

constexpr std::size_t kColumns = 8;

template <class T>
T parse_number(std::string_view text, std::size_t row, const char* field) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw MboParseError(row, field, "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<MboEvent> parse_mbo(std::istream& in, const MboParseOptions& opts) {
  std::string line;
  if (!std::getline(in, line)) throw MboParseError(1, "", "missing header");
  if (trim_cr(line) != kMboHeader) {
    throw MboParseError(1, "", "header must be '" + std::string(kMboHeader) + "'");
  }

  std::vector<MboEvent> events;
  std::unordered_map<std::uint64_t, std::int64_t> live;  // order_id -> resting qty
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view text = trim_cr(line);
    if (text.empty()) continue;
    const auto fields = split(text);
    if (fields.size() != kColumns) {
      throw MboParseError(row, "", "expected " + std::to_string(kColumns) + " columns, got " +
                                       std::to_string(fields.size()));
    }

    MboEvent e;
    e.ts_ns = parse_number<std::int64_t>(fields[0], row, "ts_ns");
    e.order_id = parse_number<std::uint64_t>(fields[1], row, "order_id");

    const std::string_view action = fields[2];
    if (action == "Add") e.action = Action::Add;
    else if (action == "Modify") e.action = Action::Modify;
    else if (action == "Cancel") e.action = Action::Cancel;
    else if (action == "Execute") e.action = Action::Execute;
    else throw MboParseError(row, "action", "unknown action '" + std::string(action) + "'");

    if (fields[3] == "Bid") e.side = Side::Bid;
    else if (fields[3] == "Ask") e.side = Side::Ask;
    else throw MboParseError(row, "side", "unknown side '" + std::string(fields[3]) + "'");

    e.price = parse_number<double>(fields[4], row, "price");
    if (!std::isfinite(e.price)) throw MboParseError(row, "price", "price must be finite");
    if (opts.tick) {
      const double ticks = e.price / *opts.tick;
      if (std::abs(ticks - std::round(ticks)) > 1e-6) {
        throw MboParseError(row, "price", "price is not a multiple of the tick size");
      }
    }
    e.qty = parse_number<std::int64_t>(fields[5], row, "qty");
    if (e.qty < 0) throw MboParseError(row, "qty", "quantity must be nonnegative");

    const std::string_view flag = fields[6];
    if (flag == "1" || flag == "true") e.aggressor = true;
    else if (flag == "0" || flag == "false") e.aggressor = false;
    else if (!flag.empty()) throw MboParseError(row, "aggressor_flag", "expected 0, 1 or empty");

    if (!fields[7].empty()) {
      e.label = parse_participant(fields[7]);
      if (!e.label) throw MboParseError(row, "participant_label", "unknown label '" + std::string(fields[7]) + "'");
    }

    if (!events.empty() && e.ts_ns < events.back().ts_ns) {
      throw MboParseError(row, "ts_ns", "timestamp goes backwards");
    }

    auto it = live.find(e.order_id);
    switch (e.action) {
      case Action::Add:
        if (it != live.end()) throw MboParseError(row, "order_id", "order is already live");
        if (e.qty <= 0) throw MboParseError(row, "qty", "Add needs a positive quantity");
        live.emplace(e.order_id, e.qty);
        break;
      case Action::Modify:
        if (it == live.end()) throw MboParseError(row, "order_id", "Modify references an unknown order");
        if (e.qty <= 0) throw MboParseError(row, "qty", "Modify needs a positive quantity (use Cancel)");
        it->second = e.qty;
        break;
      case Action::Cancel:
        if (it == live.end()) throw MboParseError(row, "order_id", "Cancel references an unknown order");
        live.erase(it);
        break;
      case Action::Execute:
        if (it == live.end()) throw MboParseError(row, "order_id", "Execute references an unknown order");
        if (e.qty <= 0) throw MboParseError(row, "qty", "Execute needs a positive quantity");
        it->second -= e.qty;
        if (it->second <= 0) live.erase(it);
        break;
    }
    events.push_back(e);
  }
  return events;
}

std::string format_mbo_row(const MboEvent& e) {
  // Shortest representation that parses back to the same double.
  char price[40];
  const auto res = std::to_chars(price, price + sizeof price - 1, e.price);
  *res.ptr = '\0';
  std::string out;
  out.reserve(96);
  out += std::to_string(e.ts_ns);
  out += ',';
  out += std::to_string(e.order_id);
  out += ',';
  out += to_string(e.action);
  out += ',';
  out += to_string(e.side);
  out += ',';
  out += price;
  out += ',';
  out += std::to_string(e.qty);
  out += ',';
  if (e.aggressor) out += *e.aggressor ? '1' : '0';
  out += ',';
  if (e.label) out += to_string(*e.label);
  return out;
}

void write_mbo(std::ostream& out, std::span<const MboEvent> events) {
  out << kMboHeader << '\n';
  for (const auto& e : events) out << format_mbo_row(e) << '\n';
}

// ------------------------------------------------------------------ replay

namespace {

struct Resting {
  std::uint64_t order_id;
  std::int64_t qty;
  std::size_t lifecycle;
};

struct Level {
  std::list<Resting> queue;
  std::int64_t total = 0;
};

using Ladder = std::map<double, Level>;

struct Located {
  Side side;
  double price;
  std::list<Resting>::iterator it;
};

class ReplayBook {
 public:
  BookState top(std::int64_t ts) const {
    BookState s;
    s.ts_ns = ts;
    if (!bids_.empty()) {
      s.bid = bids_.rbegin()->first;
      s.bid_qty = bids_.rbegin()->second.total;
    }
    if (!asks_.empty()) {
      s.ask = asks_.begin()->first;
      s.ask_qty = asks_.begin()->second.total;
    }
    return s;
  }

  void insert(Side side, double price, Resting r) {
    Level& level = ladder(side)[price];
    level.queue.push_back(r);
    level.total += r.qty;
    index_[r.order_id] = Located{side, price, std::prev(level.queue.end())};
  }

  Located& find(std::uint64_t id) { return index_.at(id); }

  Level& level_of(const Located& loc) { return ladder(loc.side).at(loc.price); }

  void remove(std::uint64_t id) {
    Located loc = index_.at(id);
    Ladder& lad = ladder(loc.side);
    Level& level = lad.at(loc.price);
    level.total -= loc.it->qty;
    level.queue.erase(loc.it);
    if (level.queue.empty()) lad.erase(loc.price);
    index_.erase(id);
  }

  void reduce(const Located& loc, std::int64_t by) {
    loc.it->qty -= by;
    level_of(loc).total -= by;
  }

 private:
  Ladder& ladder(Side s) { return s == Side::Bid ? bids_ : asks_; }

  Ladder bids_;
  Ladder asks_;
  std::unordered_map<std::uint64_t, Located> index_;
};

[[noreturn]] void replay_error(std::size_t i, const MboEvent& e, const std::string& what) {
  throw std::runtime_error("event " + std::to_string(i) + " (order " + std::to_string(e.order_id) + ", ts " +
                           std::to_string(e.ts_ns) + "): " + what);
}

}  // namespace

Reconstruction reconstruct_lifecycles(std::span<const MboEvent> events) {
  Reconstruction out;
  out.states.reserve(events.size());
  out.lifecycle_of_event.reserve(events.size());
  ReplayBook book;
  std::unordered_map<std::uint64_t, std::size_t> live;  // order_id -> lifecycle index

  for (std::size_t i = 0; i < events.size(); ++i) {
    const MboEvent& e = events[i];
    std::size_t lc_index = 0;
    if (e.action == Action::Add) {
      if (live.contains(e.order_id)) replay_error(i, e, "order is already live");
      OrderLifecycle lc;
      lc.order_id = e.order_id;
      lc.side = e.side;
      lc.add_index = i;
      lc.add_ts = e.ts_ns;
      lc.add_price = e.price;
      lc.add_qty = e.qty;
      lc.at_add = book.top(e.ts_ns);
      lc.label = e.label;
      lc_index = out.lifecycles.size();
      out.lifecycles.push_back(std::move(lc));
      live.emplace(e.order_id, lc_index);
      book.insert(e.side, e.price, Resting{e.order_id, e.qty, lc_index});
    } else {
      auto it = live.find(e.order_id);
      if (it == live.end()) replay_error(i, e, "references an order that is not resting");
      lc_index = it->second;
      OrderLifecycle& lc = out.lifecycles[lc_index];
      Located& loc = book.find(e.order_id);
      if (loc.side != e.side) replay_error(i, e, "side does not match the resting order");

      switch (e.action) {
        case Action::Modify: {
          ++lc.n_updates;
          if (e.price != loc.price || e.qty > loc.it->qty) {
            // Price changes and size increases lose queue priority.
            book.remove(e.order_id);
            book.insert(e.side, e.price, Resting{e.order_id, e.qty, lc_index});
          } else {
            book.reduce(loc, loc.it->qty - e.qty);
          }
          break;
        }
        case Action::Cancel:
          book.remove(e.order_id);
          lc.terminal_ts = e.ts_ns;
          lc.terminal_kind = TerminalKind::Canceled;
          live.erase(it);
          break;
        case Action::Execute: {
          if (e.price != loc.price) replay_error(i, e, "execution price differs from the resting price");
          const Level& level = book.level_of(loc);
          if (level.queue.front().order_id != e.order_id) replay_error(i, e, "execution is not at the queue front");
          if (e.qty > loc.it->qty) replay_error(i, e, "execution exceeds the resting quantity");
          lc.executed_qty += e.qty;
          lc.fills.push_back(Fill{i, e.ts_ns, e.price, e.qty});
          if (e.qty == loc.it->qty) {
            book.remove(e.order_id);
            lc.terminal_ts = e.ts_ns;
            lc.terminal_kind = TerminalKind::Executed;
            live.erase(it);
          } else {
            book.reduce(loc, e.qty);
          }
          break;
        }
        case Action::Add:
          break;
      }
    }
    out.lifecycle_of_event.push_back(lc_index);
    out.states.push_back(book.top(e.ts_ns));
  }

  for (std::size_t k = 0; k < out.lifecycles.size(); ++k) {
    if (!out.lifecycles[k].terminal_kind) out.open.push_back(k);
  }
  return out;
}

}  // namespace lobeq
