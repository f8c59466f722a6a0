#include "argentum/agents.hpp"

#include "argentum/errors.hpp"

namespace argentum::agents {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Saver: return "saver";
    case Role::Recurrent: return "recurrent";
    case Role::ConservativeInvestor: return "investor";
    case Role::Corporate: return "corporate";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view text) {
  for (Role r : {Role::Saver, Role::Recurrent, Role::ConservativeInvestor, Role::Corporate}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

std::string_view to_string(IntentKind kind) {
  switch (kind) {
    case IntentKind::Deposit: return "deposit";
    case IntentKind::PlaceOrder: return "order";
    case IntentKind::Bid: return "bid";
    case IntentKind::Transfer: return "transfer";
    case IntentKind::Redeem: return "redeem";
  }
  return "?";
}

void AgentProfile::validate() const {
  if (monthly_deposit.is_negative() || lump_sum.is_negative() || price_cap.is_negative() ||
      initial_fiat.is_negative()) {
    throw Error(Errc::InvalidConfig, "agent amounts must be non-negative");
  }
  const Rate one = Rate::units(1);
  if (spend_fraction.is_negative() || one < spend_fraction || redeem_fraction.is_negative() || one < redeem_fraction) {
    throw Error(Errc::InvalidConfig, "agent fractions must lie in [0, 1]");
  }
  if (!(withdraw_prob >= 0.0 && withdraw_prob <= 1.0)) throw Error(Errc::InvalidConfig, "probability must lie in [0, 1]");
  if (lock_days < 0) throw Error(Errc::InvalidConfig, "lock_days must be non-negative");
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

namespace {

Tokens fraction_of(Tokens balance, Rate f) { return floor_to<Tokens>(Exact::of(balance) * Exact::of(f)); }

Intent make(IntentKind kind, std::size_t agent) {
  Intent it;
  it.kind = kind;
  it.agent = agent;
  return it;
}

}  // namespace

std::vector<Intent> step_agent(const AgentProfile& profile, std::size_t index, const Observation& obs,
                               AgentState& state, Rng& rng) {
  std::vector<Intent> out;
  const auto redeem = [&](Tokens amount) {
    if (!amount.is_positive()) return;
    Intent it = make(IntentKind::Redeem, index);
    it.tokens = amount;
    it.immediate = profile.immediate;
    out.push_back(it);
  };

  switch (profile.role) {
    case Role::Saver: {
      if (obs.day % 30 == 0 && profile.monthly_deposit.is_positive()) {
        Intent it = make(IntentKind::Deposit, index);
        it.fiat = profile.monthly_deposit;
        out.push_back(it);
      }
      if (rng.uniform() < profile.withdraw_prob) redeem(fraction_of(obs.spendable, profile.redeem_fraction));
      break;
    }
    case Role::Recurrent: {
      if (obs.day % 30 == 0 && profile.monthly_deposit.is_positive()) {
        Intent it = make(IntentKind::Deposit, index);
        it.fiat = profile.monthly_deposit;
        out.push_back(it);
      }
      // Both draws happen every day so the stream stays aligned with the calendar.
      const std::uint64_t pick = obs.roster_size > 1 ? rng.below(obs.roster_size - 1) : 0;
      const bool withdraw = rng.uniform() < profile.withdraw_prob;
      const Tokens spend = fraction_of(obs.spendable, profile.spend_fraction);
      if (obs.roster_size > 1 && spend.is_positive()) {
        Intent it = make(IntentKind::Transfer, index);
        it.tokens = spend;
        it.peer = pick >= index ? pick + 1 : pick;
        out.push_back(it);
      }
      if (withdraw) redeem(fraction_of(obs.spendable - spend, profile.redeem_fraction));
      break;
    }
    case Role::ConservativeInvestor: {
      if (!state.bid_day) {
        if (obs.auction_today && profile.lump_sum.is_positive()) {
          Intent it = make(IntentKind::Bid, index);
          it.fiat = profile.lump_sum;
          it.price_cap = profile.price_cap;
          out.push_back(it);
          state.bid_day = obs.day;
        }
      } else if (!state.exited && obs.day > *state.bid_day + obs.premium_maturity_days) {
        redeem(obs.spendable);
        state.exited = true;
      }
      break;
    }
    case Role::Corporate: {
      if (obs.day == 0 && profile.lump_sum.is_positive()) {
        Intent it = make(IntentKind::PlaceOrder, index);
        it.fiat = profile.lump_sum;
        out.push_back(it);
      }
      if (!state.exited && obs.day == profile.lock_days && obs.day > 0) {
        redeem(obs.spendable);
        state.exited = true;
      }
      break;
    }
  }
  return out;
}

}  // namespace argentum::agents
