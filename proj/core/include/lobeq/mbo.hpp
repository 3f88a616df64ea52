#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lobeq {

enum class Participant { IT, NT, IMM, NMM };

std::string_view to_string(Participant p);
std::optional<Participant> parse_participant(std::string_view s);

enum class Action { Add, Modify, Cancel, Execute };
enum class Side { Bid, Ask };

std::string_view to_string(Action a);
std::string_view to_string(Side s);

/// One row of a market-by-order feed.
///
/// Modify carries the new price and the new resting quantity. Execute
/// carries the executed quantity and references the resting (passive)
/// order; its side is the resting order's side, so an Ask execution is a
/// buyer-initiated trade. `aggressor` marks the first execution of each
/// incoming order. On Execute rows `label` is the aggressor's label; on
/// other rows it is the resting order's owner.
struct MboEvent {
  std::int64_t ts_ns = 0;
  std::uint64_t order_id = 0;
  Action action = Action::Add;
  Side side = Side::Bid;
  double price = 0.0;
  std::int64_t qty = 0;
  std::optional<bool> aggressor;
  std::optional<Participant> label;

  friend bool operator==(const MboEvent&, const MboEvent&) = default;
};

inline constexpr std::string_view kMboHeader =
    "ts_ns,order_id,action,side,price,qty,aggressor_flag,participant_label";

class MboParseError : public std::runtime_error {
 public:
  MboParseError(std::size_t row, std::string field, const std::string& what);
  std::size_t row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t row_;
  std::string field_;
};

struct MboParseOptions {
  /// When set, every price must be an integer multiple of the tick.
  std::optional<double> tick;
};

/// Parses and validates a feed. Row numbers in diagnostics are 1-based
/// file lines (the header is line 1).
std::vector<MboEvent> parse_mbo(std::istream& in, const MboParseOptions& opts = {});

void write_mbo(std::ostream& out, std::span<const MboEvent> events);
std::string format_mbo_row(const MboEvent& e);

// ------------------------------------------------------------- replay

/// Top of book after an event. Empty sides have no price and zero volume.
struct BookState {
  std::int64_t ts_ns = 0;
  std::optional<double> bid;
  std::optional<double> ask;
  std::int64_t bid_qty = 0;
  std::int64_t ask_qty = 0;

  friend bool operator==(const BookState&, const BookState&) = default;
};

enum class TerminalKind { Executed, Canceled };

struct Fill {
  std::size_t event_index;
  std::int64_t ts_ns;
  double price;
  std::int64_t qty;
};

struct OrderLifecycle {
  std::uint64_t order_id = 0;
  Side side = Side::Bid;
  std::size_t add_index = 0;
  std::int64_t add_ts = 0;
  double add_price = 0.0;
  std::int64_t add_qty = 0;
  std::optional<std::int64_t> terminal_ts;
  std::optional<TerminalKind> terminal_kind;
  int n_updates = 0;
  std::int64_t executed_qty = 0;
  std::vector<Fill> fills;
  BookState at_add;  ///< top of book just before the Add
  std::optional<Participant> label;
};

struct Reconstruction {
  std::vector<OrderLifecycle> lifecycles;  ///< in Add order, including open ones
  std::vector<std::size_t> open;           ///< indices still resting at end of file
  std::vector<BookState> states;           ///< one per event, after applying it
  /// For each event, index into `lifecycles` of the order it touches.
  std::vector<std::size_t> lifecycle_of_event;
};

/// Replays validated events with price-time priority. Throws
/// std::runtime_error naming the event when an execution does not hit the
/// front of its queue or exceeds the resting quantity.
Reconstruction reconstruct_lifecycles(std::span<const MboEvent> events);

}  // namespace lobeq
