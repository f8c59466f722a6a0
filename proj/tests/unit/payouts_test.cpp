#include "argentum/errors.hpp"
#include "argentum/payouts.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace argentum;
using namespace argentum::payouts;

namespace {

struct World {
  ledger::Ledger book;
  treasury::Treasury treasury;
  int opened = 0;

  World(const char* v, const char* f, const char* withheld, Series cpi = Series::constant(SeriesValue::units(100)))
      : treasury(
            [&] {
              treasury::TreasuryState s;
              s.backing_value = Value::parse(v);
              s.fund = Value::parse(f);
              s.withheld_supply = Tokens::parse(withheld);
              s.base_price = Price::units(1);
              return s;
            }(),
            std::move(cpi)) {
    if (Tokens::parse(withheld).is_positive()) book.mint(ledger::Pool::Withheld, Tokens::parse(withheld), 0);
  }

  ledger::AccountId holder(Tokens tokens) {
    const auto id = book.open_account(ledger::commit_identity("h" + std::to_string(opened++)), 0);
    if (tokens.is_positive()) {
      book.mint(ledger::Pool::Offered, tokens, 0);
      treasury.mint_offered(tokens);
      book.deliver(ledger::TxKind::TokenTransfer, ledger::Pool::Offered, id, tokens, 0);
      treasury.deliver_offered(tokens);
    }
    return id;
  }

  void contraction(Day day) { treasury.book_earnings(day, Value::units(-1)); }
};

auction::AuctionResult result_of(std::vector<std::pair<ledger::AccountId, std::int64_t>> lots, std::uint64_t id = 0) {
  auction::AuctionResult r;
  r.cohort_id = id;
  std::int64_t t = 0;
  for (auto& [acct, n] : lots) {
    auction::Award a;
    a.account = acct;
    a.timestamp = t++;
    a.lots = n;
    a.tokens = Tokens::units(n);
    a.charged = Pesos::units(n);
    a.deposit = a.charged;
    r.awards.push_back(a);
    r.lots_allocated += n;
  }
  return r;
}

}  // namespace

TEST(Interest, ExpansionPaysTokensFromWithheld) {
  World w("1000", "0", "500");
  const auto a = w.holder(Tokens::units(100));
  PayoutEngine engine;
  ASSERT_TRUE(engine.interest_due(30));
  const auto out = engine.accrue_interest(30, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].tokens, Tokens::units(2));
  EXPECT_EQ(w.book.account(a).token_balance, Tokens::units(102));
  EXPECT_EQ(w.treasury.state().withheld_supply, Tokens::units(498));
  EXPECT_EQ(w.treasury.state().public_supply, Tokens::units(102));
}

TEST(Interest, ContractionPaysFiatFromFund) {
  World w("1000", "50", "0", Series(Series::Fill::StepHold, {{0, SeriesValue::units(100)}, {30, SeriesValue::units(110)}}));
  const auto a = w.holder(Tokens::units(100));
  w.contraction(30);
  PayoutEngine engine;
  const auto out = engine.accrue_interest(30, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].fiat, Pesos::parse("2.20"));
  EXPECT_EQ(w.book.account(a).fiat_balance, Pesos::parse("2.20"));
  EXPECT_EQ(w.treasury.state().fund, Value::parse("47.80"));
  EXPECT_EQ(w.treasury.state().backing_value, Value::parse("997.80"));
}

TEST(Interest, EmptyBalanceEarnsNothing) {
  World w("1000", "0", "500");
  w.holder(Tokens{});
  PayoutEngine engine;
  EXPECT_TRUE(engine.accrue_interest(30, w.book, w.treasury).empty());
}

TEST(Interest, DueOnlyOnPeriodBoundaries) {
  PayoutEngine engine;
  EXPECT_FALSE(engine.interest_due(0));
  EXPECT_FALSE(engine.interest_due(29));
  EXPECT_TRUE(engine.interest_due(60));
}

TEST(Interest, EscrowedTokensEarnNothing) {
  World w("1000", "0", "500");
  const auto a = w.holder(Tokens::units(100));
  w.book.lock_escrow(a, Tokens::units(40), Pesos{}, 1);
  PayoutEngine engine;
  const auto out = engine.accrue_interest(30, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].tokens, Tokens::parse("1.2"));
}

TEST(Interest, FundShortfallIsRecorded) {
  World w("1000", "1", "0");
  w.holder(Tokens::units(100));
  w.contraction(30);
  PayoutEngine engine;
  const auto out = engine.accrue_interest(30, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].fiat, Pesos::units(1));
  EXPECT_EQ(engine.missed(), Pesos::units(1));
  EXPECT_TRUE(w.treasury.state().fund.is_zero());
}

TEST(Interest, WithheldShortFallsBackToFiat) {
  World w("1000", "10", "1");
  w.holder(Tokens::units(100));
  PayoutEngine engine;
  const auto out = engine.accrue_interest(30, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].tokens.is_zero());
  EXPECT_EQ(out[0].fiat, Pesos::units(2));
}

TEST(Premium, SharesFollowTokenWeights) {
  Cohort c;
  c.members = {{"a", Tokens::units(10)}, {"b", Tokens::units(90)}};
  c.continuous_holding = {{"a", true}, {"b", true}};
  c.total_tokens = Tokens::units(100);
  const auto s = premium_shares(c, Pesos::units(1000), Rate::parse("0.7"));
  EXPECT_EQ(s[0], Pesos::units(70));
  EXPECT_EQ(s[1], Pesos::units(630));
  for (const auto& v : premium_shares(c, Pesos{}, Rate::parse("0.7"))) EXPECT_TRUE(v.is_zero());
}

TEST(Premium, SellerLosesEligibility) {
  World w("10000", "0", "5000");
  const auto a = w.holder(Tokens::units(10));
  const auto b = w.holder(Tokens::units(10));
  const auto other = w.holder(Tokens{});
  PayoutEngine engine({}, {Rate::parse("0.7"), 1, 10});
  w.book.set_debit_observer([&](const ledger::AccountId& id, Tokens t) { engine.on_debit(id, t); });
  engine.record_cohort(result_of({{a, 10}, {b, 10}}), 0);
  w.book.transfer_tokens(a, other, Tokens::parse("0.00000001"), 3);
  EXPECT_FALSE(engine.cohorts()[0].continuous_holding.at(a));
  EXPECT_TRUE(engine.cohorts()[0].continuous_holding.at(b));
  engine.attribute_earnings(Value::units(200), Tokens::units(20));
  const auto out = engine.mature_premium(0, 10, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].account, b);
  EXPECT_EQ(out[0].tokens, Tokens::units(70));  // 0.7 * 1/2 * 200 at price 1
}

TEST(Premium, MaturesExactlyOnce) {
  World w("10000", "0", "5000");
  const auto a = w.holder(Tokens::units(10));
  PayoutEngine engine;
  engine.record_cohort(result_of({{a, 10}}), 0);
  const auto code = [&](Day day) {
    try {
      engine.mature_premium(0, day, w.book, w.treasury);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::ParseError;
  };
  EXPECT_EQ(engine.premium().maturity_days(), 1800);
  EXPECT_EQ(code(1799), Errc::NotMature);
  EXPECT_NO_THROW(engine.mature_premium(0, 1800, w.book, w.treasury));
  EXPECT_EQ(code(1801), Errc::AlreadyMatured);
  EXPECT_EQ(code(-5), Errc::AlreadyMatured);
  EXPECT_TRUE(engine.mature_due(2000, w.book, w.treasury).empty());
  try {
    engine.mature_premium(7, 1800, w.book, w.treasury);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownRequest);
  }
}

TEST(Premium, GainNetsOutInflation) {
  // principal 100, earnings 30, CPI +20% -> 100 + 30 - 120 = 10
  World w("10000", "0", "0",
          Series(Series::Fill::StepHold, {{0, SeriesValue::units(100)}, {50, SeriesValue::units(120)}}));
  const auto a = w.holder(Tokens::units(100));
  PayoutEngine engine;
  engine.record_cohort(result_of({{a, 100}}), 0);
  engine.attribute_earnings(Value::units(60), Tokens::units(200));
  const auto& c = engine.cohorts()[0];
  EXPECT_EQ(c.earnings, Value::units(30));
  EXPECT_EQ(engine.gain(c, 50, w.treasury), Pesos::units(10));
  EXPECT_EQ(engine.gain(c, 0, w.treasury), Pesos::units(30));
  engine.attribute_earnings(Value::units(-100), Tokens::units(200));
  EXPECT_TRUE(engine.gain(engine.cohorts()[0], 50, w.treasury).is_zero());
}

TEST(Premium, ContractionPaysFromFund) {
  World w("10000", "500", "0");
  const auto a = w.holder(Tokens::units(100));
  PayoutEngine engine({}, {Rate::parse("0.7"), 1, 10});
  engine.record_cohort(result_of({{a, 100}}), 0);
  engine.attribute_earnings(Value::units(100), Tokens::units(100));
  w.contraction(10);
  const auto out = engine.mature_premium(0, 10, w.book, w.treasury);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].fiat, Pesos::units(70));
  EXPECT_EQ(w.treasury.state().fund, Value::units(430));
}

TEST(Premium, EmptyAuctionOpensNoCohort) {
  PayoutEngine engine;
  EXPECT_EQ(engine.record_cohort(result_of({{"a", 0}}), 0), nullptr);
  EXPECT_TRUE(engine.cohorts().empty());
}

TEST(PremiumProperty, TotalNeverExceedsRateTimesGain) {
  std::mt19937_64 g(31);
  for (int n = 0; n < 3000; ++n) {
    Cohort c;
    const int members = std::uniform_int_distribution<int>(1, 12)(g);
    bool all_held = true;
    for (int i = 0; i < members; ++i) {
      const auto id = "m" + std::to_string(i);
      const auto t = Tokens::from_raw(std::uniform_int_distribution<std::int64_t>(1, 100000000000)(g));
      c.members[id] = t;
      c.total_tokens += t;
      const bool held = g() % 5 != 0;
      c.continuous_holding[id] = held;
      all_held = all_held && held;
    }
    const auto gain = Pesos::from_raw(std::uniform_int_distribution<std::int64_t>(0, 100000000)(g));
    const auto rate = Rate::from_raw(std::uniform_int_distribution<std::int64_t>(0, 1000000000)(g));
    oracle::Rational total = 0;
    for (const auto& s : premium_shares(c, gain, rate)) {
      EXPECT_FALSE(s.is_negative());
      total += oracle::Rational(s.raw(), 100);
    }
    const oracle::Rational bound = oracle::Rational(rate.raw(), 1000000000) * oracle::Rational(gain.raw(), 100);
    EXPECT_LE(total, bound);
    if (all_held) {
      EXPECT_LT(bound - total, oracle::Rational(members, 100));
    }
  }
}

TEST(PayoutProperty, NeverDrivesPoolsNegative) {
  std::mt19937_64 g(8);
  for (int n = 0; n < 100; ++n) {
    World w("100000", std::to_string(std::uniform_int_distribution<int>(0, 50)(g)).c_str(),
            std::to_string(std::uniform_int_distribution<int>(0, 30)(g)).c_str());
    for (int i = 0; i < 8; ++i) w.holder(Tokens::units(std::uniform_int_distribution<int>(0, 400)(g)));
    PayoutEngine engine;
    for (Day d = 1; d <= 180; ++d) {
      w.treasury.book_earnings(d, Value::units(std::uniform_int_distribution<int>(-10, 8)(g)));
      if (engine.interest_due(d)) engine.accrue_interest(d, w.book, w.treasury);
      EXPECT_FALSE(w.treasury.state().fund.is_negative());
      EXPECT_FALSE(w.treasury.state().withheld_supply.is_negative());
      EXPECT_EQ(w.book.state().pools.withheld, w.treasury.state().withheld_supply);
      EXPECT_EQ(w.book.state().public_supply(), w.treasury.state().public_supply);
    }
  }
}
