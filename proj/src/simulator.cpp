#include "argentum/simulator.hpp"

#include "argentum/errors.hpp"

#include <stdexcept>

namespace argentum {

namespace {

treasury::TreasuryState initial_treasury(const ScenarioConfig& c) {
  treasury::TreasuryState s;
  s.backing_value = c.initial_value;
  s.fund = c.initial_fund;
  s.base_price = c.base_price;
  s.fund_ratio = c.phi;
  s.phase_window = c.phase_window;
  return s;
}

}  // namespace

Engine::Engine(ScenarioConfig config)
    : config_((config.validate(), std::move(config))),
      ledger_(config_.transfer_fee),
      treasury_(initial_treasury(config_), config_.cpi, config_.fund_backstop),
      orders_(config_.redemption.hold_days),
      desk_(config_.redemption),
      payouts_(config_.interest, config_.premium) {
  ledger_.set_debit_observer([this](const ledger::AccountId& id, Tokens spendable) { payouts_.on_debit(id, spendable); });
  open_accounts();
}

void Engine::open_accounts() {
  for (std::size_t i = 0; i < config_.roster.size(); ++i) {
    const auto id = ledger_.open_account(ledger::commit_identity("agent:" + std::to_string(i)), 0);
    if (config_.roster[i].initial_fiat.is_positive()) ledger_.deposit_fiat(id, config_.roster[i].initial_fiat, 0);
    accounts_.push_back(id);
    agent_states_.emplace_back();
    rngs_.emplace_back(config_.seed, i);
  }
}

std::vector<agents::Intent> Engine::collect_intents(Day day) {
  std::vector<agents::Intent> all;
  for (std::size_t i = 0; i < config_.roster.size(); ++i) {
    const auto& acct = ledger_.account(accounts_[i]);
    agents::Observation obs;
    obs.day = day;
    obs.auction_today = auction_day(day);
    obs.spendable = acct.token_balance;
    obs.fiat_balance = acct.fiat_balance;
    obs.roster_size = config_.roster.size();
    obs.premium_maturity_days = config_.premium.maturity_days();
    auto mine = agents::step_agent(config_.roster[i], i, obs, agent_states_[i], rngs_[i]);
    all.insert(all.end(), mine.begin(), mine.end());
  }
  return all;
}

void Engine::apply_intent(const agents::Intent& intent, Day day, std::vector<auction::Bid>& bids) {
  const ledger::AccountId& id = accounts_[intent.agent];
  const ledger::Account& acct = ledger_.account(id);
  const auto drop = [&] { ++counters_.dropped_intents; };

  // Optional creation limit: the buyer's holdings after the purchase, valued
  // at today's target, may not exceed the configured share of active supply.
  const auto within_share = [&](Pesos fiat) {
    if (!config_.max_account_share.is_positive()) return true;
    const Exact bought = Exact::of(fiat) / Exact::of(treasury_.target_price(day));
    const Exact after = Exact::of(acct.tokens_held()) + bought;
    const Exact supply = Exact::of(treasury_.state().active_supply()) + bought;
    return !(Exact::of(config_.max_account_share) * supply < after);
  };

  switch (intent.kind) {
    case agents::IntentKind::Deposit:
      if (!intent.fiat.is_positive() || !within_share(intent.fiat)) return drop();
      ledger_.deposit_fiat(id, intent.fiat, day);
      orders_.place_purchase_order(ledger_, id, intent.fiat, day);
      return;
    case agents::IntentKind::PlaceOrder:
      if (!intent.fiat.is_positive() || acct.fiat_balance < intent.fiat || !within_share(intent.fiat)) return drop();
      orders_.place_purchase_order(ledger_, id, intent.fiat, day);
      return;
    case agents::IntentKind::Bid: {
      if (!auction_day(day) || !intent.fiat.is_positive() || !intent.price_cap.is_positive() ||
          acct.fiat_balance < intent.fiat) {
        return drop();
      }
      for (const auto& b : bids) {
        if (b.account == id) return drop();
      }
      const auto tx = ledger_.lock_escrow(id, Tokens{}, intent.fiat, day, "bid");
      bids.push_back({id, intent.fiat, intent.price_cap, static_cast<std::int64_t>(tx.seq)});
      return;
    }
    case agents::IntentKind::Transfer: {
      if (intent.peer >= accounts_.size() || intent.peer == intent.agent || !intent.tokens.is_positive()) return drop();
      const Tokens fee = round_to<Tokens>(Exact::of(ledger_.transfer_fee()) * Exact::of(intent.tokens));
      if (acct.token_balance < intent.tokens + fee) return drop();
      for (const auto& tx : ledger_.transfer_tokens(id, accounts_[intent.peer], intent.tokens, day)) {
        if (tx.kind == ledger::TxKind::Fee) treasury_.absorb_fee(tx.token_amount);
      }
      return;
    }
    case agents::IntentKind::Redeem:
      if (!intent.tokens.is_positive() || acct.token_balance < intent.tokens) return drop();
      desk_.request_redemption(ledger_, id, intent.tokens, day, intent.immediate);
      return;
  }
}

Pesos Engine::run_auction(Day day, std::vector<auction::Bid> bids, Pesos leftover_capacity) {
  if (bids.empty()) return Pesos{};
  auction::AuctionConfig cfg;
  cfg.lot_size = config_.lot_size;
  cfg.gamma = config_.gamma;
  cfg.base_price = round_to<Pesos>(Exact::of(treasury_.target_price(day)) * Exact::of(config_.lot_size));
  if (config_.auction_lots > 0) {
    cfg.lots = config_.auction_lots;
  } else if (cfg.base_price.is_positive() && leftover_capacity.is_positive()) {
    cfg.lots = leftover_capacity.raw() / cfg.base_price.raw();
  }
  auto result = auction::run_auction(bids, cfg, next_cohort_);
  try {
    auction::settle(result, cfg, day, ledger_, treasury_, config_.allow_mint);
  } catch (const Error& e) {
    if (e.code() != Errc::OfferedPoolShort) throw;
    cfg.lots = auction::provisionable_lots(cfg, treasury_.state(), config_.allow_mint);
    result = auction::run_auction(std::move(bids), cfg, next_cohort_);
    auction::settle(result, cfg, day, ledger_, treasury_, config_.allow_mint);
  }
  ++counters_.auctions;
  counters_.lots_sold += static_cast<std::uint64_t>(result.lots_allocated);
  Pesos charged;
  for (const auto& a : result.awards) charged += a.charged;
  if (payouts_.record_cohort(result, day) != nullptr) ++next_cohort_;
  auctions_.push_back(std::move(result));
  return charged;
}

void Engine::reconcile(Day day) const {
  const auto& ls = ledger_.state();
  const auto& ts = treasury_.state();
  if (ls.pools.withheld != ts.withheld_supply || ls.pools.offered != ts.offered_supply ||
      ls.public_supply() != ts.public_supply) {
    throw std::logic_error("ledger and treasury disagree on day " + std::to_string(day));
  }
}

const DailyMetrics& Engine::step() {
  if (done()) throw std::logic_error("scenario already finished");
  const Day d = day_;

  // (1)-(2) revalue and book earnings
  Value earnings;
  if (d > 0) earnings = treasury_.mark_to_market(*config_.returns.at(d - 1), *config_.returns.at(d));
  treasury_.book_earnings(d, earnings);
  payouts_.attribute_earnings(earnings, treasury_.state().public_supply);

  // (3)-(4) intents
  const auto intents = collect_intents(d);
  counters_.intents += intents.size();
  std::vector<auction::Bid> bids;
  for (const auto& intent : intents) apply_intent(intent, d, bids);
  if (config_.mass_redemption_day && *config_.mass_redemption_day == d) {
    for (const auto& id : accounts_) {
      const Tokens all = ledger_.account(id).token_balance;
      if (all.is_positive()) desk_.request_redemption(ledger_, id, all, d, config_.mass_redemption_immediate);
    }
  }

  // (5) purchase orders
  const Pesos capacity = floor_to<Pesos>(Exact::of(config_.opportunities.at_or_zero(d)));
  Pesos filled;
  for (const auto& ev : orders_.match_orders(d, capacity, ledger_, treasury_)) {
    if (ev.status == issuance::OrderStatus::Filled) {
      filled += ev.fiat_amount;
      ++counters_.orders_filled;
    } else {
      ++counters_.orders_refunded;
    }
  }

  // (6) auction
  if (auction_day(d)) run_auction(d, std::move(bids), capacity - filled);

  // (7) redemptions
  for (const auto& out : desk_.process_redemptions(d, ledger_, treasury_)) {
    if (out.liquidity_exhausted) {
      ++counters_.liquidity_exhausted;
    } else {
      ++counters_.redemptions_paid;
      counters_.redemptions_escalated += out.escalated;
    }
  }

  // (8) interest and premiums
  std::vector<payouts::Payout> paid;
  if (payouts_.interest_due(d)) paid = payouts_.accrue_interest(d, ledger_, treasury_);
  auto premiums = payouts_.mature_due(d, ledger_, treasury_);
  paid.insert(paid.end(), premiums.begin(), premiums.end());

  // (9) peg
  const auto report = treasury_.rebalance_peg(d);
  if (report.minted.is_positive()) ledger_.mint(ledger::Pool::Withheld, report.minted, d, "peg");
  if (report.burned.is_positive()) ledger_.burn_pool(ledger::Pool::Withheld, report.burned, d, "peg");
  peg_reports_.push_back(report);

  // (10) metrics
  const auto& ts = treasury_.state();
  DailyMetrics m;
  m.day = d;
  m.target_price = report.target_price;
  m.backed_price = report.backed_price;
  m.deviation = report.deviation;
  m.public_supply = ts.public_supply;
  m.offered_supply = ts.offered_supply;
  m.withheld_supply = ts.withheld_supply;
  m.backing_value = ts.backing_value;
  m.fund = ts.fund;
  m.queued_redemptions = desk_.queued_tokens();
  m.disposable = desk_.disposable();
  for (const auto& p : paid) {
    m.payouts_today += p.fiat + round_to<Pesos>(Exact::of(p.tokens) * Exact::of(report.target_price));
  }
  m.stress = report.stress;
  counters_.stress_days += report.stress;
  payout_log_.insert(payout_log_.end(), paid.begin(), paid.end());
  reconcile(d);
  metrics_.push_back(m);

  // (11) seal
  ledger_.seal_block(d);
  ++day_;
  return metrics_.back();
}

void Engine::run() {
  while (!done()) step();
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  Engine engine(config);
  engine.run();
  return {engine.metrics(), engine.ledger().snapshot()};
}

}  // namespace argentum
