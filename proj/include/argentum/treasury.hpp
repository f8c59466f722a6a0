#pragma once

// CPI-pegged treasury: target price, anti-cyclic fund, withheld-pool
// rebalancing and expansion/contraction classification.
//
// The backing portfolio V carries an anti-cyclic fund F as a reserved
// sub-claim, so the peg works against the liquid backing V - F. The token
// supply counted against it is public + offered + withheld.

#include "argentum/fixed_point.hpp"
#include "argentum/series.hpp"

#include <map>
#include <string_view>

namespace argentum::treasury {

enum class Phase { Expansion, Contraction };
std::string_view to_string(Phase phase);

struct TreasuryState {
  Value backing_value;     // V
  Value fund;              // F
  Tokens public_supply;    // held by users (escrow included)
  Tokens offered_supply;   // provisioned, not yet adjudicated
  Tokens withheld_supply;  // system pool used to close the peg
  Price base_price;        // P0
  Rate fund_ratio;         // share of positive earnings reserved into F
  int phase_window = 30;   // days

  Value liquid_backing() const { return backing_value - fund; }
  Tokens active_supply() const { return public_supply + offered_supply + withheld_supply; }
};

struct PegReport {
  Day day = 0;
  Price target_price;
  Price backed_price;
  Tokens minted;
  Tokens burned;
  Deviation deviation;
  bool stress = false;
  bool empty_supply = false;  // nothing to back: target reported, no rebalance
  Value fund_drawn;
};

class Treasury {
 public:
  /// `cpi` must be step-hold and defined at day 0. With `fund_backstop`
  /// set, a peg shortfall first draws on the anti-cyclic fund.
  Treasury(TreasuryState initial, Series cpi, bool fund_backstop = false);

  /// P0 * CPI(day) / CPI(0), rounded to 8 decimals. Errc::MissingCpi.
  Price target_price(Day day) const;
  /// The same ratio, unrounded. The peg closes against this value.
  Exact target_exact(Day day) const;

  /// Revalues V by the portfolio index move prev -> now and returns the
  /// earnings E (value change net of flows). F is clamped to the new V.
  Value mark_to_market(SeriesValue prev_level, SeriesValue level);

  /// E > 0 reserves fund_ratio * E into F. Every E enters the phase history.
  void book_earnings(Day day, Value earnings);

  /// Resizes the withheld pool so (V - F) / active supply equals the target.
  /// The pool size rounds down to the token grid, so an unstressed peg never
  /// reports a negative deviation; deviation is likewise rounded down.
  PegReport rebalance_peg(Day day);

  /// Expansion iff the trailing phase_window days of booked earnings sum
  /// to a positive value. Day 0 (or no history) is Expansion.
  Phase phase(Day day) const;
  Value trailing_earnings(Day day) const;

  /// Exact backed/target - 1 for the current state; zero for empty supply.
  Exact exact_deviation(Day day) const;

  // Flow primitives. Each mirrors one ledger movement; violations of the
  // non-negativity invariants throw std::logic_error.
  void add_backing(Value amount);
  /// Removes value from V; must not cut into F.
  void remove_backing(Value amount);
  /// Pays up to `amount` out of F (and V); returns what was paid.
  Value draw_fund(Value amount);
  void mint_offered(Tokens amount);
  void withheld_to_offered(Tokens amount);
  void deliver_offered(Tokens amount);
  void withheld_to_public(Tokens amount);
  void burn_public(Tokens amount);
  void absorb_fee(Tokens amount);

  const TreasuryState& state() const { return state_; }
  const Series& cpi() const { return cpi_; }
  bool fund_backstop() const { return fund_backstop_; }

 private:
  SeriesValue cpi_at(Day day) const;

  TreasuryState state_;
  Series cpi_;
  bool fund_backstop_;
  std::map<Day, Value> earnings_;
};

}  // namespace argentum::treasury
