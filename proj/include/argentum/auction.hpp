#pragma once

// Monthly deconcentrative bidding. Lots go one at a time to the eligible
// bidder with the highest D'Hondt quotient deposit / (lots won + 1), and
// each further lot a bidder wins costs more than the last.

#include "argentum/fixed_point.hpp"
#include "argentum/ledger.hpp"
#include "argentum/treasury.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace argentum::auction {

using ledger::AccountId;

struct Bid {
  AccountId account;
  Pesos deposit;      // escrowed before the auction runs
  Price price_cap;    // highest acceptable AR$ per token
  std::int64_t timestamp = 0;
};

struct AuctionConfig {
  std::int64_t lots = 0;                     // Q
  Tokens lot_size = Tokens::units(1);        // L
  Pesos base_price;                          // B
  Rate gamma = Rate::parse("0.05");

  void validate() const;
};

/// B * (1 + gamma * (k - 1)), rounded half-even to cents. k >= 1.
Pesos lot_price(std::int64_t k, const AuctionConfig& config);

struct Award {
  AccountId account;
  std::int64_t timestamp = 0;
  Pesos deposit;
  std::int64_t lots = 0;
  std::vector<Pesos> prices;  // price of each lot in award order
  Pesos charged;
  Pesos refund;
  Tokens tokens;
};

struct AuctionResult {
  std::vector<Award> awards;  // one per bid, ordered by timestamp
  std::int64_t lots_allocated = 0;
  std::uint64_t cohort_id = 0;
};

/// Errc::InvalidBids on a non-positive deposit or cap, or a repeated
/// account or timestamp. The input order of `bids` does not matter.
AuctionResult run_auction(std::vector<Bid> bids, const AuctionConfig& config, std::uint64_t cohort_id = 0);

/// Lots the treasury can put on offer without failing settlement.
std::int64_t provisionable_lots(const AuctionConfig& config, const treasury::TreasuryState& state, bool allow_mint);

/// Books the result: per award an AuctionSettle for the charge, an
/// OrderRefund for the rest of the deposit and a TokenTransfer of the won
/// tokens out of the offered pool, which is first topped up from the
/// withheld pool and then, when allowed, by minting. V grows by the total
/// charged. Errc::OfferedPoolShort (nothing booked) if the lots cannot be
/// provisioned.
std::vector<ledger::Transaction> settle(const AuctionResult& result, const AuctionConfig& config, Day day,
                                        ledger::Ledger& book, treasury::Treasury& treasury, bool allow_mint = true);

/// Header `account,deposit,price_cap,timestamp`. Errc::InvalidBids(line).
std::vector<Bid> read_bids(std::istream& in);
/// Header `account,lots,charged,refund,tokens`, one row per award.
void write_result(std::ostream& out, const AuctionResult& result);

}  // namespace argentum::auction
