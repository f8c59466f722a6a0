#pragma once

// Creation and selling rules: purchase orders held against daily
// opportunity capacity (refunded after a hold period), and redemptions
// gated by a per-period reserve requirement.

#include "argentum/fixed_point.hpp"
#include "argentum/ledger.hpp"
#include "argentum/treasury.hpp"

#include <cstdint>
#include <vector>

namespace argentum::issuance {

using ledger::AccountId;

enum class OrderStatus { Pending, Filled, Refunded };
std::string_view to_string(OrderStatus status);

struct PurchaseOrder {
  std::uint64_t id = 0;
  AccountId account;
  Pesos fiat_amount;
  Day day_placed = 0;
  OrderStatus status = OrderStatus::Pending;
  Day day_closed = -1;
  Tokens tokens;  // delivered on fill
};

struct OrderEvent {
  std::uint64_t order_id = 0;
  AccountId account;
  OrderStatus status = OrderStatus::Pending;
  Pesos fiat_amount;
  Tokens tokens;
};

class OrderBook {
 public:
  explicit OrderBook(int hold_days = 30);

  /// Escrows `fiat_amount` from the account and queues the order.
  /// Errors: NonPositiveAmount, InsufficientFiat, UnknownAccount.
  const PurchaseOrder& place_purchase_order(ledger::Ledger& book, const AccountId& account, Pesos fiat_amount, Day day);

  /// Fills pending orders first-in first-out, each all-or-nothing, while
  /// their cumulative fiat fits in `capacity`; the first order that does
  /// not fit stops the pass. Then refunds every still-pending order that
  /// has waited hold_days or more.
  std::vector<OrderEvent> match_orders(Day day, Pesos capacity, ledger::Ledger& book, treasury::Treasury& treasury);

  const std::vector<PurchaseOrder>& orders() const { return orders_; }
  std::size_t pending_count() const { return orders_.size() - first_pending_; }
  int hold_days() const { return hold_days_; }

 private:
  int hold_days_;
  std::vector<PurchaseOrder> orders_;
  std::size_t first_pending_ = 0;  // closed orders always form a prefix
};

struct RedemptionPolicy {
  Rate reserve_ratio = Rate::parse("0.10");  // share of V - F redeemable per period
  int period_days = 30;
  Rate exit_fee = Rate::parse("0.01");
  Rate escalated_fee = Rate::parse("0.05");
  int hold_days = 30;  // purchase-order hold before refund

  void validate() const;
};

enum class RedemptionStatus { Queued, Paid, Cancelled };
std::string_view to_string(RedemptionStatus status);

struct RedemptionRequest {
  std::uint64_t id = 0;
  AccountId account;
  Tokens tokens;
  Day day = 0;
  bool immediate = false;
  RedemptionStatus status = RedemptionStatus::Queued;
  Day day_closed = -1;
  Pesos gross;
  Pesos payout;
  bool escalated = false;
};

struct RedemptionOutcome {
  std::uint64_t request_id = 0;
  AccountId account;
  Tokens tokens;
  Pesos gross;
  Pesos payout;
  bool escalated = false;
  bool liquidity_exhausted = false;  // immediate request left queued
};

/// One reserve-requirement period.
struct PeriodRecord {
  Day start_day = 0;
  Value base;  // V - F when the period opened
  Pesos cap;   // reserve_ratio * base
  Pesos paid_regular;
  Pesos paid_escalated;
};

class RedemptionDesk {
 public:
  explicit RedemptionDesk(RedemptionPolicy policy = {});

  /// Escrows the tokens and queues the request.
  /// Errors: NonPositiveAmount, InsufficientTokens, UnknownAccount.
  const RedemptionRequest& request_redemption(ledger::Ledger& book, const AccountId& account, Tokens tokens, Day day,
                                              bool immediate);

  /// Returns escrowed tokens of a queued request. Errc::UnknownRequest.
  void cancel(std::uint64_t request_id, ledger::Ledger& book, Day day);

  /// Serves the queue in order against the prorated period allowance.
  /// A request that does not fit closes the allowance for everyone behind
  /// it; immediate requests past that point pay the escalated fee as long
  /// as the liquid backing covers them.
  std::vector<RedemptionOutcome> process_redemptions(Day day, ledger::Ledger& book, treasury::Treasury& treasury);

  /// Allowance left in the current period after the latest processing.
  Pesos disposable() const { return disposable_; }
  /// cap * (days elapsed in period) / period_days, rounded down.
  Pesos allowance(Day day) const;
  Tokens queued_tokens() const;
  std::size_t queued_count() const;

  const std::vector<RedemptionRequest>& requests() const { return requests_; }
  const std::vector<PeriodRecord>& periods() const { return periods_; }
  const RedemptionPolicy& policy() const { return policy_; }

 private:
  void open_period_if_needed(Day day, const treasury::Treasury& treasury);
  RedemptionOutcome pay(RedemptionRequest& req, Rate fee, bool escalated, Pesos gross, Day day, ledger::Ledger& book,
                        treasury::Treasury& treasury);

  RedemptionPolicy policy_;
  std::vector<RedemptionRequest> requests_;
  std::vector<PeriodRecord> periods_;
  Pesos disposable_;
};

}  // namespace argentum::issuance
