#pragma once

// Daily scenario engine. Each day runs, in order: revalue the portfolio
// and book earnings, collect agent intents, apply deposits and transfers,
// match purchase orders, run the monthly auction, serve redemptions, pay
// interest and premiums, rebalance the peg, record metrics, seal a block.

#include "argentum/agents.hpp"
#include "argentum/auction.hpp"
#include "argentum/config.hpp"
#include "argentum/issuance.hpp"
#include "argentum/ledger.hpp"
#include "argentum/payouts.hpp"
#include "argentum/treasury.hpp"

#include <cstdint>
#include <vector>

namespace argentum {

struct DailyMetrics {
  Day day = 0;
  Price target_price;
  Price backed_price;
  Deviation deviation;
  Tokens public_supply;
  Tokens offered_supply;
  Tokens withheld_supply;
  Value backing_value;
  Value fund;
  Tokens queued_redemptions;
  Pesos disposable;
  Pesos payouts_today;
  bool stress = false;
};

struct RunCounters {
  std::uint64_t intents = 0;
  std::uint64_t dropped_intents = 0;
  std::uint64_t orders_filled = 0;
  std::uint64_t orders_refunded = 0;
  std::uint64_t auctions = 0;
  std::uint64_t lots_sold = 0;
  std::uint64_t redemptions_paid = 0;
  std::uint64_t redemptions_escalated = 0;
  std::uint64_t liquidity_exhausted = 0;
  std::uint64_t stress_days = 0;
};

class Engine {
 public:
  explicit Engine(ScenarioConfig config);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  bool done() const { return day_ >= config_.horizon_days; }
  /// Next day to be simulated.
  Day day() const { return day_; }
  const DailyMetrics& step();
  void run();

  bool auction_day(Day day) const { return day % 30 == config_.auction_day_of_month - 1; }

  const ScenarioConfig& config() const { return config_; }
  const ledger::Ledger& ledger() const { return ledger_; }
  const treasury::Treasury& treasury() const { return treasury_; }
  const issuance::OrderBook& orders() const { return orders_; }
  const issuance::RedemptionDesk& redemptions() const { return desk_; }
  const payouts::PayoutEngine& payout_engine() const { return payouts_; }
  const std::vector<DailyMetrics>& metrics() const { return metrics_; }
  const std::vector<treasury::PegReport>& peg_reports() const { return peg_reports_; }
  const std::vector<payouts::Payout>& payouts() const { return payout_log_; }
  const std::vector<auction::AuctionResult>& auctions() const { return auctions_; }
  const std::vector<ledger::AccountId>& accounts() const { return accounts_; }
  const RunCounters& counters() const { return counters_; }

 private:
  void open_accounts();
  std::vector<agents::Intent> collect_intents(Day day);
  void apply_intent(const agents::Intent& intent, Day day, std::vector<auction::Bid>& bids);
  Pesos run_auction(Day day, std::vector<auction::Bid> bids, Pesos leftover_capacity);
  void reconcile(Day day) const;

  ScenarioConfig config_;
  ledger::Ledger ledger_;
  treasury::Treasury treasury_;
  issuance::OrderBook orders_;
  issuance::RedemptionDesk desk_;
  payouts::PayoutEngine payouts_;

  std::vector<ledger::AccountId> accounts_;
  std::vector<agents::AgentState> agent_states_;
  std::vector<agents::Rng> rngs_;

  Day day_ = 0;
  std::uint64_t next_cohort_ = 0;
  std::vector<DailyMetrics> metrics_;
  std::vector<treasury::PegReport> peg_reports_;
  std::vector<payouts::Payout> payout_log_;
  std::vector<auction::AuctionResult> auctions_;
  RunCounters counters_;
};

struct ScenarioResult {
  std::vector<DailyMetrics> metrics;
  ledger::LedgerState final_state;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace argentum
