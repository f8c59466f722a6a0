#include "argentum/payouts.hpp"

#include "argentum/errors.hpp"

namespace argentum::payouts {

std::string_view to_string(PayoutKind kind) { return kind == PayoutKind::Interest ? "interest" : "premium"; }

void InterestPolicy::validate() const {
  if (rate.is_negative() || !(rate < Rate::units(1))) throw Error(Errc::InvalidConfig, "interest rate must lie in [0, 1)");
  if (period_days < 1) throw Error(Errc::InvalidConfig, "interest period must be at least one day");
}

void PremiumPolicy::validate() const {
  if (rate.is_negative() || Rate::units(1) < rate) throw Error(Errc::InvalidConfig, "premium rate must lie in [0, 1]");
  if (semesters < 0) throw Error(Errc::InvalidConfig, "semesters must be non-negative");
  if (semester_days < 1) throw Error(Errc::InvalidConfig, "semester length must be at least one day");
}

std::vector<Pesos> premium_shares(const Cohort& cohort, Pesos gain, Rate rate) {
  std::vector<Pesos> out;
  out.reserve(cohort.members.size());
  for (const auto& [id, tokens] : cohort.members) {
    const auto it = cohort.continuous_holding.find(id);
    if (it == cohort.continuous_holding.end() || !it->second || !cohort.total_tokens.is_positive()) {
      out.push_back(Pesos{});
      continue;
    }
    out.push_back(floor_to<Pesos>(Exact::of(rate) * Exact::of(tokens) / Exact::of(cohort.total_tokens) *
                                  Exact::of(gain)));
  }
  return out;
}

PayoutEngine::PayoutEngine(InterestPolicy interest, PremiumPolicy premium) : interest_(interest), premium_(premium) {
  interest_.validate();
  premium_.validate();
}

Pesos PayoutEngine::pay_from_fund(Day day, const AccountId& account, PayoutKind kind, Pesos value,
                                  ledger::Ledger& book, treasury::Treasury& treasury) {
  const Pesos available = floor_to<Pesos>(Exact::of(treasury.state().fund));
  const Pesos paid = min_of(value, available);
  missed_ += value - paid;
  if (!paid.is_positive()) return Pesos{};
  treasury.draw_fund(widen<Value>(paid));
  const auto tx_kind = kind == PayoutKind::Interest ? ledger::TxKind::InterestPayout : ledger::TxKind::PremiumPayout;
  book.pay_fiat(tx_kind, account, paid, day, std::string(to_string(kind)));
  return paid;
}

Payout PayoutEngine::pay_value(Day day, const AccountId& account, PayoutKind kind, Pesos value, ledger::Ledger& book,
                               treasury::Treasury& treasury) {
  Payout p{day, account, kind, Tokens{}, Pesos{}};
  if (treasury.phase(day) == treasury::Phase::Expansion) {
    const Tokens tokens = round_to<Tokens>(Exact::of(value) / Exact::of(treasury.target_price(day)));
    if (tokens.is_positive() && !(treasury.state().withheld_supply < tokens)) {
      const auto tx_kind =
          kind == PayoutKind::Interest ? ledger::TxKind::InterestPayout : ledger::TxKind::PremiumPayout;
      book.deliver(tx_kind, ledger::Pool::Withheld, account, tokens, day, std::string(to_string(kind)));
      treasury.withheld_to_public(tokens);
      p.tokens = tokens;
      return p;
    }
  }
  p.fiat = pay_from_fund(day, account, kind, value, book, treasury);
  return p;
}

std::vector<Payout> PayoutEngine::accrue_interest(Day day, ledger::Ledger& book, treasury::Treasury& treasury) {
  std::vector<Payout> out;
  if (!interest_.rate.is_positive()) return out;
  std::vector<std::pair<AccountId, Tokens>> holders;
  for (const auto& [id, acct] : book.state().accounts) {
    if (acct.token_balance.is_positive()) holders.emplace_back(id, acct.token_balance);
  }
  const bool expansion = treasury.phase(day) == treasury::Phase::Expansion;
  const Price target = treasury.target_price(day);
  for (const auto& [id, balance] : holders) {
    const Tokens tokens = round_to<Tokens>(Exact::of(interest_.rate) * Exact::of(balance));
    if (expansion && tokens.is_positive() && !(treasury.state().withheld_supply < tokens)) {
      book.deliver(ledger::TxKind::InterestPayout, ledger::Pool::Withheld, id, tokens, day, "interest");
      treasury.withheld_to_public(tokens);
      out.push_back({day, id, PayoutKind::Interest, tokens, Pesos{}});
      continue;
    }
    const Pesos value = round_to<Pesos>(Exact::of(interest_.rate) * Exact::of(balance) * Exact::of(target));
    if (!value.is_positive()) continue;
    const Pesos paid = pay_from_fund(day, id, PayoutKind::Interest, value, book, treasury);
    if (paid.is_positive()) out.push_back({day, id, PayoutKind::Interest, Tokens{}, paid});
  }
  return out;
}

const Cohort* PayoutEngine::record_cohort(const auction::AuctionResult& result, Day day) {
  Cohort c;
  c.id = result.cohort_id;
  c.formation_day = day;
  for (const auto& a : result.awards) {
    if (a.lots == 0) continue;
    c.members[a.account] = a.tokens;
    c.continuous_holding[a.account] = true;
    c.total_tokens += a.tokens;
    c.principal += a.charged;
  }
  if (c.members.empty()) return nullptr;
  cohorts_.push_back(std::move(c));
  return &cohorts_.back();
}

void PayoutEngine::attribute_earnings(Value earnings, Tokens public_supply) {
  if (earnings.is_zero() || !public_supply.is_positive()) return;
  for (Cohort& c : cohorts_) {
    if (c.matured) continue;
    c.earnings += round_to<Value>(Exact::of(earnings) * Exact::of(c.total_tokens) / Exact::of(public_supply));
  }
}

Pesos PayoutEngine::gain(const Cohort& cohort, Day day, const treasury::Treasury& treasury) const {
  const Exact indexed =
      Exact::of(cohort.principal) * treasury.target_exact(day) / treasury.target_exact(cohort.formation_day);
  const Exact g = Exact::of(cohort.principal) + Exact::of(cohort.earnings) - indexed;
  if (g.sign() <= 0) return Pesos{};
  return round_to<Pesos>(g);
}

std::vector<Payout> PayoutEngine::mature_premium(std::uint64_t cohort_id, Day day, ledger::Ledger& book,
                                                 treasury::Treasury& treasury) {
  Cohort* cohort = nullptr;
  for (Cohort& c : cohorts_) {
    if (c.id == cohort_id) cohort = &c;
  }
  if (cohort == nullptr) throw Error(Errc::UnknownRequest, "no cohort " + std::to_string(cohort_id));
  if (cohort->matured) throw Error(Errc::AlreadyMatured, "cohort " + std::to_string(cohort_id) + " already matured");
  if (day - cohort->formation_day < premium_.maturity_days()) {
    throw Error(Errc::NotMature, "cohort " + std::to_string(cohort_id) + " matures on day " +
                                     std::to_string(cohort->formation_day + premium_.maturity_days()));
  }
  const Pesos g = gain(*cohort, day, treasury);
  const auto shares = premium_shares(*cohort, g, premium_.rate);
  cohort->matured = true;
  std::vector<Payout> out;
  std::size_t i = 0;
  for (const auto& [id, tokens] : cohort->members) {
    const Pesos value = shares[i++];
    if (!value.is_positive()) continue;
    Payout p = pay_value(day, id, PayoutKind::Premium, value, book, treasury);
    if (p.tokens.is_positive() || p.fiat.is_positive()) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Payout> PayoutEngine::mature_due(Day day, ledger::Ledger& book, treasury::Treasury& treasury) {
  std::vector<Payout> out;
  for (std::size_t i = 0; i < cohorts_.size(); ++i) {
    if (cohorts_[i].matured || day - cohorts_[i].formation_day < premium_.maturity_days()) continue;
    auto paid = mature_premium(cohorts_[i].id, day, book, treasury);
    out.insert(out.end(), paid.begin(), paid.end());
  }
  return out;
}

void PayoutEngine::on_debit(const AccountId& account, Tokens spendable) {
  for (Cohort& c : cohorts_) {
    if (c.matured) continue;
    const auto it = c.members.find(account);
    if (it != c.members.end() && spendable < it->second) c.continuous_holding[account] = false;
  }
}

}  // namespace argentum::payouts
