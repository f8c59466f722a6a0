#include "argentum/issuance.hpp"

#include "argentum/errors.hpp"

namespace argentum::issuance {

std::string_view to_string(OrderStatus status) {
  switch (status) {
    case OrderStatus::Pending: return "Pending";
    case OrderStatus::Filled: return "Filled";
    case OrderStatus::Refunded: return "Refunded";
  }
  return "?";
}

std::string_view to_string(RedemptionStatus status) {
  switch (status) {
    case RedemptionStatus::Queued: return "Queued";
    case RedemptionStatus::Paid: return "Paid";
    case RedemptionStatus::Cancelled: return "Cancelled";
  }
  return "?";
}

OrderBook::OrderBook(int hold_days) : hold_days_(hold_days) {
  if (hold_days < 1) throw Error(Errc::InvalidConfig, "hold period must be at least one day");
}

const PurchaseOrder& OrderBook::place_purchase_order(ledger::Ledger& book, const AccountId& account,
                                                     Pesos fiat_amount, Day day) {
  if (!fiat_amount.is_positive()) throw Error(Errc::NonPositiveAmount, "order amount must be positive");
  if (book.account(account).fiat_balance < fiat_amount) {
    throw Error(Errc::InsufficientFiat, "fiat balance " + book.account(account).fiat_balance.to_string() + " < " +
                                            fiat_amount.to_string());
  }
  PurchaseOrder order;
  order.id = orders_.size();
  book.lock_escrow(account, Tokens{}, fiat_amount, day, "order " + std::to_string(order.id));
  order.account = account;
  order.fiat_amount = fiat_amount;
  order.day_placed = day;
  orders_.push_back(std::move(order));
  return orders_.back();
}

std::vector<OrderEvent> OrderBook::match_orders(Day day, Pesos capacity, ledger::Ledger& book,
                                                treasury::Treasury& treasury) {
  std::vector<OrderEvent> events;
  const Price target = treasury.target_price(day);
  Pesos used;

  const auto refund = [&](PurchaseOrder& o) {
    book.release_escrow(o.account, Tokens{}, o.fiat_amount, day, "order " + std::to_string(o.id) + " expired");
    o.status = OrderStatus::Refunded;
    o.day_closed = day;
    events.push_back({o.id, o.account, o.status, o.fiat_amount, Tokens{}});
  };

  while (first_pending_ < orders_.size()) {
    PurchaseOrder& o = orders_[first_pending_];
    if (capacity < used + o.fiat_amount) break;
    const Tokens tokens = round_to<Tokens>(Exact::of(o.fiat_amount) / Exact::of(target));
    ++first_pending_;
    if (!tokens.is_positive()) {
      refund(o);
      continue;
    }
    used += o.fiat_amount;
    const std::string memo = "order " + std::to_string(o.id);
    book.settle_escrow(ledger::TxKind::PurchaseSettle, o.account, o.fiat_amount, day, memo);
    treasury.add_backing(widen<Value>(o.fiat_amount));
    const Tokens on_offer = treasury.state().offered_supply;
    if (on_offer < tokens) {
      book.mint(ledger::Pool::Offered, tokens - on_offer, day, memo);
      treasury.mint_offered(tokens - on_offer);
    }
    book.deliver(ledger::TxKind::TokenTransfer, ledger::Pool::Offered, o.account, tokens, day, memo);
    treasury.deliver_offered(tokens);
    o.status = OrderStatus::Filled;
    o.day_closed = day;
    o.tokens = tokens;
    events.push_back({o.id, o.account, o.status, o.fiat_amount, tokens});
  }

  while (first_pending_ < orders_.size() && day - orders_[first_pending_].day_placed >= hold_days_) {
    refund(orders_[first_pending_++]);
  }
  return events;
}

void RedemptionPolicy::validate() const {
  const Rate one = Rate::units(1);
  if (!reserve_ratio.is_positive() || one < reserve_ratio) {
    throw Error(Errc::InvalidConfig, "reserve ratio must lie in (0, 1]");
  }
  if (period_days < 1) throw Error(Errc::InvalidConfig, "redemption period must be at least one day");
  if (exit_fee.is_negative() || !(exit_fee < escalated_fee) || !(escalated_fee < one)) {
    throw Error(Errc::InvalidConfig, "need 0 <= exit fee < escalated fee < 1");
  }
  if (hold_days < 1) throw Error(Errc::InvalidConfig, "hold period must be at least one day");
}

RedemptionDesk::RedemptionDesk(RedemptionPolicy policy) : policy_(policy) { policy_.validate(); }

const RedemptionRequest& RedemptionDesk::request_redemption(ledger::Ledger& book, const AccountId& account,
                                                            Tokens tokens, Day day, bool immediate) {
  if (!tokens.is_positive()) throw Error(Errc::NonPositiveAmount, "redemption amount must be positive");
  if (book.account(account).token_balance < tokens) {
    throw Error(Errc::InsufficientTokens, "spendable tokens " + book.account(account).token_balance.to_string() +
                                              " < " + tokens.to_string());
  }
  RedemptionRequest req;
  req.id = requests_.size();
  book.lock_escrow(account, tokens, Pesos{}, day, "redeem " + std::to_string(req.id));
  req.account = account;
  req.tokens = tokens;
  req.day = day;
  req.immediate = immediate;
  requests_.push_back(std::move(req));
  return requests_.back();
}

void RedemptionDesk::cancel(std::uint64_t request_id, ledger::Ledger& book, Day day) {
  if (request_id >= requests_.size() || requests_[request_id].status != RedemptionStatus::Queued) {
    throw Error(Errc::UnknownRequest, "no queued request " + std::to_string(request_id));
  }
  RedemptionRequest& req = requests_[request_id];
  book.release_escrow(req.account, req.tokens, Pesos{}, day, "redeem " + std::to_string(req.id) + " cancelled");
  req.status = RedemptionStatus::Cancelled;
  req.day_closed = day;
}

void RedemptionDesk::open_period_if_needed(Day day, const treasury::Treasury& treasury) {
  const Day start = day - day % policy_.period_days;
  if (!periods_.empty() && periods_.back().start_day == start) return;
  PeriodRecord p;
  p.start_day = start;
  p.base = max_of(treasury.state().liquid_backing(), Value{});
  p.cap = floor_to<Pesos>(Exact::of(p.base) * Exact::of(policy_.reserve_ratio));
  periods_.push_back(p);
}

Pesos RedemptionDesk::allowance(Day day) const {
  if (periods_.empty()) return Pesos{};
  const PeriodRecord& p = periods_.back();
  const Day elapsed = std::min<Day>(day - p.start_day + 1, policy_.period_days);
  return floor_to<Pesos>(Exact::of(p.cap) * Exact::integer(elapsed) / Exact::integer(policy_.period_days));
}

RedemptionOutcome RedemptionDesk::pay(RedemptionRequest& req, Rate fee, bool escalated, Pesos gross, Day day,
                                      ledger::Ledger& book, treasury::Treasury& treasury) {
  const Pesos net = round_to<Pesos>(Exact::of(gross) * (Exact::integer(1) - Exact::of(fee)));
  const std::string memo = std::string(escalated ? "escalated" : "regular") + " gross=" + gross.to_string();
  book.burn_escrowed(req.account, req.tokens, day, "redeem " + std::to_string(req.id));
  treasury.burn_public(req.tokens);
  if (net.is_positive()) book.pay_fiat(ledger::TxKind::RedemptionPayout, req.account, net, day, memo);
  treasury.remove_backing(widen<Value>(gross));
  req.status = RedemptionStatus::Paid;
  req.day_closed = day;
  req.gross = gross;
  req.payout = net;
  req.escalated = escalated;
  return {req.id, req.account, req.tokens, gross, net, escalated, false};
}

std::vector<RedemptionOutcome> RedemptionDesk::process_redemptions(Day day, ledger::Ledger& book,
                                                                   treasury::Treasury& treasury) {
  open_period_if_needed(day, treasury);
  PeriodRecord& period = periods_.back();
  const Price target = treasury.target_price(day);
  Pesos remaining = allowance(day) - period.paid_regular;
  bool gate_closed = false;
  std::vector<RedemptionOutcome> out;

  for (RedemptionRequest& req : requests_) {
    if (req.status != RedemptionStatus::Queued) continue;
    const Pesos gross = round_to<Pesos>(Exact::of(req.tokens) * Exact::of(target));
    const Value liquid = treasury.state().liquid_backing();
    const bool liquid_ok = !(liquid < widen<Value>(gross));
    if (!gate_closed && !(remaining < gross) && liquid_ok) {
      out.push_back(pay(req, policy_.exit_fee, false, gross, day, book, treasury));
      period.paid_regular += gross;
      remaining -= gross;
      continue;
    }
    gate_closed = true;
    if (!req.immediate) continue;
    if (liquid_ok) {
      out.push_back(pay(req, policy_.escalated_fee, true, gross, day, book, treasury));
      period.paid_escalated += gross;
    } else {
      out.push_back({req.id, req.account, req.tokens, gross, Pesos{}, true, true});
    }
  }
  disposable_ = max_of(remaining, Pesos{});
  return out;
}

Tokens RedemptionDesk::queued_tokens() const {
  Tokens sum;
  for (const auto& r : requests_) {
    if (r.status == RedemptionStatus::Queued) sum += r.tokens;
  }
  return sum;
}

std::size_t RedemptionDesk::queued_count() const {
  std::size_t n = 0;
  for (const auto& r : requests_) n += r.status == RedemptionStatus::Queued;
  return n;
}

}  // namespace argentum::issuance
