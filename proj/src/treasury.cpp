#include "argentum/treasury.hpp"

#include "argentum/errors.hpp"

#include <stdexcept>

namespace argentum::treasury {

std::string_view to_string(Phase phase) { return phase == Phase::Expansion ? "Expansion" : "Contraction"; }

Treasury::Treasury(TreasuryState initial, Series cpi, bool fund_backstop)
    : state_(initial), cpi_(std::move(cpi)), fund_backstop_(fund_backstop) {
  if (!state_.base_price.is_positive()) throw Error(Errc::InvalidConfig, "base price must be positive");
  if (state_.phase_window < 1) throw Error(Errc::InvalidConfig, "phase window must be at least one day");
  if (state_.fund_ratio.is_negative() || state_.fund_ratio > Rate::units(1)) {
    throw Error(Errc::InvalidConfig, "fund ratio must lie in [0, 1]");
  }
  if (state_.fund.is_negative() || state_.fund > state_.backing_value) {
    throw Error(Errc::InvalidConfig, "need V >= F >= 0");
  }
}

SeriesValue Treasury::cpi_at(Day day) const {
  const auto v = cpi_.at(day);
  if (!v) throw Error(Errc::MissingCpi, "no CPI value for day " + std::to_string(day), static_cast<std::uint64_t>(day));
  if (!v->is_positive()) throw Error(Errc::MissingCpi, "CPI must be positive (day " + std::to_string(day) + ")");
  return *v;
}

Exact Treasury::target_exact(Day day) const {
  return Exact::of(state_.base_price) * Exact::of(cpi_at(day)) / Exact::of(cpi_at(0));
}

Price Treasury::target_price(Day day) const { return round_to<Price>(target_exact(day)); }

Value Treasury::mark_to_market(SeriesValue prev_level, SeriesValue level) {
  if (!prev_level.is_positive() || !level.is_positive()) throw Error(Errc::InvalidConfig, "index levels must be positive");
  const Value revalued = round_to<Value>(Exact::of(state_.backing_value) * Exact::of(level) / Exact::of(prev_level));
  const Value earnings = revalued - state_.backing_value;
  state_.backing_value = revalued;
  if (state_.fund > state_.backing_value) state_.fund = state_.backing_value;
  return earnings;
}

void Treasury::book_earnings(Day day, Value earnings) {
  earnings_[day] = earnings;
  if (earnings.is_positive()) {
    const Value reserved = round_to<Value>(Exact::of(earnings) * Exact::of(state_.fund_ratio));
    state_.fund = min_of(state_.fund + reserved, state_.backing_value);
  }
}

Value Treasury::trailing_earnings(Day day) const {
  Value sum;
  for (auto it = earnings_.lower_bound(day - state_.phase_window + 1); it != earnings_.end() && it->first <= day; ++it) {
    sum += it->second;
  }
  return sum;
}

Phase Treasury::phase(Day day) const {
  if (day <= 0 || earnings_.empty()) return Phase::Expansion;
  return trailing_earnings(day).is_positive() ? Phase::Expansion : Phase::Contraction;
}

Exact Treasury::exact_deviation(Day day) const {
  const Tokens active = state_.active_supply();
  if (active.is_zero()) return Exact{};
  return Exact::of(state_.liquid_backing()) / (Exact::of(active) * target_exact(day)) - Exact::integer(1);
}

PegReport Treasury::rebalance_peg(Day day) {
  PegReport report;
  report.day = day;
  const Exact target = target_exact(day);
  report.target_price = round_to<Price>(target);

  const Tokens committed = state_.public_supply + state_.offered_supply;
  auto desired_withheld = [&] {
    return floor_to<Tokens>(Exact::of(state_.liquid_backing()) / target) - committed;
  };

  Tokens desired = desired_withheld();
  if (desired.is_negative() && fund_backstop_ && state_.fund.is_positive()) {
    const Exact gap = Exact::of(committed) * target - Exact::of(state_.liquid_backing());
    Value release = min_of(round_to<Value>(gap), state_.fund);
    if (Exact::of(release) < gap) release = min_of(release + Value::from_raw(1), state_.fund);
    state_.fund -= release;
    report.fund_drawn = release;
    desired = desired_withheld();
  }

  const Tokens previous = state_.withheld_supply;
  const Tokens next = max_of(desired, Tokens{});
  if (committed.is_zero() && next.is_zero()) {
    report.empty_supply = true;
    report.burned = previous;
    state_.withheld_supply = Tokens{};
    return report;
  }
  state_.withheld_supply = next;
  if (next > previous) report.minted = next - previous;
  if (next < previous) report.burned = previous - next;
  report.stress = desired.is_negative();
  report.backed_price = round_to<Price>(Exact::of(state_.liquid_backing()) / Exact::of(state_.active_supply()));
  report.deviation = floor_to<Deviation>(exact_deviation(day));
  return report;
}

namespace {
void require(bool cond, const char* what) {
  if (!cond) throw std::logic_error(std::string("treasury invariant: ") + what);
}
}  // namespace

void Treasury::add_backing(Value amount) {
  require(!amount.is_negative(), "negative backing");
  state_.backing_value += amount;
}

void Treasury::remove_backing(Value amount) {
  require(!amount.is_negative() && amount <= state_.liquid_backing(), "payout exceeds liquid backing");
  state_.backing_value -= amount;
}

Value Treasury::draw_fund(Value amount) {
  require(!amount.is_negative(), "negative draw");
  const Value paid = min_of(amount, state_.fund);
  state_.fund -= paid;
  state_.backing_value -= paid;
  return paid;
}

void Treasury::mint_offered(Tokens amount) { state_.offered_supply += amount; }

void Treasury::withheld_to_offered(Tokens amount) {
  require(amount <= state_.withheld_supply, "withheld pool short");
  state_.withheld_supply -= amount;
  state_.offered_supply += amount;
}

void Treasury::deliver_offered(Tokens amount) {
  require(amount <= state_.offered_supply, "offered pool short");
  state_.offered_supply -= amount;
  state_.public_supply += amount;
}

void Treasury::withheld_to_public(Tokens amount) {
  require(amount <= state_.withheld_supply, "withheld pool short");
  state_.withheld_supply -= amount;
  state_.public_supply += amount;
}

void Treasury::burn_public(Tokens amount) {
  require(amount <= state_.public_supply, "public supply short");
  state_.public_supply -= amount;
}

void Treasury::absorb_fee(Tokens amount) {
  require(amount <= state_.public_supply, "public supply short");
  state_.public_supply -= amount;
  state_.withheld_supply += amount;
}

}  // namespace argentum::treasury
