#include "argentum/errors.hpp"
#include "argentum/ledger.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace argentum;
using namespace argentum::ledger;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::ParseError;
}

AccountId funded(Ledger& l, const std::string& who, const char* tokens) {
  const auto id = l.open_account(commit_identity(who), 0);
  if (Tokens::parse(tokens).is_positive()) {
    l.mint(Pool::Offered, Tokens::parse(tokens), 0);
    l.deliver(TxKind::TokenTransfer, Pool::Offered, id, Tokens::parse(tokens), 0);
  }
  return id;
}

}  // namespace

TEST(Ledger, OpenAccountStartsEmpty) {
  Ledger l;
  const auto id = l.open_account(commit_identity("alice"), 0);
  const auto& a = l.account(id);
  EXPECT_TRUE(a.token_balance.is_zero());
  EXPECT_TRUE(a.fiat_balance.is_zero());
  ASSERT_EQ(l.pending().size(), 1u);
  EXPECT_EQ(l.pending()[0].kind, TxKind::AccountOpen);
}

TEST(Ledger, ZeroCommitmentRejected) {
  Ledger l;
  EXPECT_EQ(code_of([&] { l.open_account(IdentityCommitment{}, 0); }), Errc::ZeroCommitment);
}

TEST(Ledger, DuplicateIdentityRejected) {
  Ledger l;
  l.open_account(commit_identity("alice"), 0);
  EXPECT_EQ(code_of([&] { l.open_account(commit_identity("alice"), 0); }), Errc::DuplicateIdentity);
}

TEST(Ledger, FullBalanceTransfer) {
  Ledger l;
  const auto a = funded(l, "a", "100");
  const auto b = funded(l, "b", "0");
  l.transfer_tokens(a, b, Tokens::units(100), 0);
  EXPECT_TRUE(l.account(a).token_balance.is_zero());
  EXPECT_EQ(l.account(b).token_balance, Tokens::units(100));
}

TEST(Ledger, TransferPreconditions) {
  Ledger l;
  const auto a = funded(l, "a", "100");
  const auto b = funded(l, "b", "0");
  EXPECT_EQ(code_of([&] { l.transfer_tokens(a, b, Tokens{}, 0); }), Errc::NonPositiveAmount);
  EXPECT_EQ(code_of([&] { l.transfer_tokens(a, a, Tokens::units(1), 0); }), Errc::SelfTransfer);
  EXPECT_EQ(code_of([&] { l.transfer_tokens(b, a, Tokens::units(1), 0); }), Errc::InsufficientBalance);
  EXPECT_EQ(code_of([&] { l.transfer_tokens(a, "acct-999999", Tokens::units(1), 0); }), Errc::UnknownAccount);
}

TEST(Ledger, TransferFeeFromRate) {
  // fee = rate * amount, half-even to 8 dp, recomputed with an independent rational.
  const oracle::Rational fee_units = oracle::Rational(1, 1000) * 50 * 100000000;
  const auto fee_raw = static_cast<std::int64_t>(oracle::round_half_even(fee_units));
  ASSERT_EQ(fee_raw, 5000000);

  Ledger l(Rate::parse("0.001"));
  const auto a = funded(l, "a", "100");
  const auto b = funded(l, "b", "0");
  const auto txs = l.transfer_tokens(a, b, Tokens::units(50), 0);
  EXPECT_EQ(l.account(a).token_balance, Tokens::parse("49.95"));
  EXPECT_EQ(l.account(b).token_balance, Tokens::units(50));
  ASSERT_EQ(txs.size(), 2u);
  EXPECT_EQ(txs[1].kind, TxKind::Fee);
  EXPECT_EQ(txs[1].token_amount.raw(), fee_raw);
  EXPECT_EQ(l.state().pools.withheld, Tokens::parse("0.05"));
}

TEST(Ledger, FeeMustBeCoveredToo) {
  Ledger l(Rate::parse("0.001"));
  const auto a = funded(l, "a", "100");
  const auto b = funded(l, "b", "0");
  EXPECT_EQ(code_of([&] { l.transfer_tokens(a, b, Tokens::units(100), 0); }), Errc::InsufficientBalance);
  EXPECT_EQ(l.account(a).token_balance, Tokens::units(100));
}

TEST(Ledger, GenesisBlockLinksToZero) {
  Ledger l;
  const auto& b = l.seal_block(0);
  EXPECT_EQ(b.height, 0u);
  EXPECT_TRUE(is_zero(b.prev_hash));
  EXPECT_TRUE(b.txs.empty());
  EXPECT_EQ(b.hash, sha256(canonical_block(0, 0, b.prev_hash, {})));
}

TEST(Ledger, CanonicalBytes) {
  Transaction tx;
  tx.seq = 7;
  tx.day = 3;
  tx.kind = TxKind::FiatDeposit;
  tx.from = "SYSTEM";
  tx.to = "acct-000001";
  tx.fiat_amount = Pesos::parse("12.5");
  tx.memo = "hello";
  EXPECT_EQ(serialize(tx), "7|3|FiatDeposit|SYSTEM|acct-000001|0.00000000|12.50|hello");
  const Hash256 zero{};
  EXPECT_EQ(canonical_block(2, 3, zero, {tx}),
            "2|3|" + std::string(64, '0') + "\n7|3|FiatDeposit|SYSTEM|acct-000001|0.00000000|12.50|hello\n");
}

TEST(Ledger, SealingIsDeterministic) {
  const auto build = [] {
    Ledger l(Rate::parse("0.002"));
    const auto a = funded(l, "a", "10");
    const auto b = funded(l, "b", "0");
    l.seal_block(0);
    l.transfer_tokens(a, b, Tokens::parse("1.5"), 1);
    l.deposit_fiat(b, Pesos::units(3), 1);
    return l.seal_block(1).hash;
  };
  EXPECT_EQ(build(), build());
}

TEST(Ledger, FlippedByteBreaksVerification) {
  Ledger l;
  const auto a = funded(l, "a", "10");
  l.deposit_fiat(a, Pesos::units(5), 0);
  l.seal_block(0);
  auto chain = l.state().chain;
  chain[0].txs[1].token_amount = Tokens::parse("10.00000001");
  EXPECT_EQ(code_of([&] { verify_chain(chain); }), Errc::BrokenChain);
}

TEST(Ledger, ReplayOfEmptyChainIsGenesis) {
  Ledger l;
  funded(l, "a", "10");
  const auto genesis = l.snapshot();
  EXPECT_EQ(replay(genesis, {}).accounts, genesis.accounts);
}

TEST(Ledger, AlteredPrevHashNamesHeight) {
  Ledger l;
  for (Day d = 0; d < 6; ++d) {
    l.open_account(commit_identity("u" + std::to_string(d)), d);
    l.seal_block(d);
  }
  auto chain = l.state().chain;
  chain[3].prev_hash[0] ^= 1;
  try {
    replay({}, chain);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BrokenChain);
    EXPECT_EQ(e.where(), 3u);
  }
}

TEST(Ledger, InvalidReplayedTransactionNamesSeq) {
  Ledger l;
  const auto a = funded(l, "a", "10");
  l.seal_block(0);
  // A block that re-hashes correctly but overspends.
  Transaction tx{l.state().next_seq, 1, TxKind::FiatWithdraw, a, "SYSTEM", Tokens{}, Pesos::units(1), ""};
  auto chain = l.state().chain;
  chain.push_back(seal_block(1, 1, chain.back().hash, {tx}));
  try {
    replay({}, chain);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidTransaction);
    EXPECT_EQ(e.where(), tx.seq);
  }
}

TEST(Ledger, ApplyRejectsMalformedTransactions) {
  Ledger l;
  const auto a = funded(l, "a", "10");
  const auto seq = l.state().next_seq;
  const auto bad = [&](Transaction tx) { EXPECT_EQ(code_of([&] { l.apply(tx); }), Errc::InvalidTransaction); };
  bad({seq + 1, 0, TxKind::FiatDeposit, "SYSTEM", a, {}, Pesos::units(1), ""});      // sequence gap
  bad({seq, 0, TxKind::FiatDeposit, "SYSTEM", a, {}, Pesos{}, ""});                  // nothing moves
  bad({seq, 0, TxKind::FiatDeposit, "SYSTEM", a, {}, Pesos::units(1), "a|b"});       // delimiter in memo
  bad({seq, 0, TxKind::Mint, "SYSTEM", a, Tokens::units(1), {}, ""});                // mint into a user
  bad({seq, 0, TxKind::Burn, a, "SYSTEM", Tokens::units(1), {}, ""});                // nothing escrowed
  bad({seq, 0, TxKind::TokenTransfer, a, a, Tokens::units(1), {}, ""});              // self
  bad({seq, 0, TxKind::InterestPayout, "SYSTEM", a, Tokens::units(1), Pesos::units(1), ""});
  EXPECT_EQ(l.state().next_seq, seq);
}

TEST(LedgerExport, RoundTripsBitExactly) {
  Ledger l(Rate::parse("0.001"));
  const auto a = funded(l, "a", "100");
  const auto b = funded(l, "b", "0");
  l.seal_block(0);
  l.transfer_tokens(a, b, Tokens::parse("12.34567891"), 1);
  l.seal_block(1);
  l.seal_block(2);
  const std::string text = format_ledger(l.state().chain);
  const auto parsed = parse_ledger(text);
  EXPECT_EQ(parsed, l.state().chain);
  EXPECT_EQ(format_ledger(parsed), text);
}

TEST(LedgerExport, RejectsTruncatedOrNonCanonicalInput) {
  Ledger l;
  funded(l, "a", "1");
  l.seal_block(0);
  const std::string text = format_ledger(l.state().chain);
  EXPECT_EQ(code_of([&] { parse_ledger(text.substr(0, text.size() - 1)); }), Errc::MalformedLedger);
  EXPECT_EQ(code_of([&] { parse_ledger(text.substr(0, text.size() / 2)); }), Errc::MalformedLedger);
  std::string crlf = text;
  crlf.insert(crlf.find('\n'), "\r");
  EXPECT_EQ(code_of([&] { parse_ledger(crlf); }), Errc::MalformedLedger);
  EXPECT_EQ(code_of([&] { parse_ledger("0|0|Mint|SYSTEM|SYSTEM:offered|1.00000000|0.00|\n"); }), Errc::MalformedLedger);
}

// Random valid operation streams for the property tests below.
namespace {

struct Stream {
  Ledger ledger{Rate::parse("0.003")};
  std::vector<AccountId> ids;
  std::mt19937_64 g;
  explicit Stream(std::uint64_t seed) : g(seed) {}

  std::int64_t pick(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(g); }
  const AccountId& any() { return ids[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(ids.size()) - 1))]; }

  void op(Day day) {
    const auto k = ids.empty() ? 0 : pick(0, 11);
    const Tokens t = Tokens::from_raw(pick(1, 5000000000));
    const Pesos f = Pesos::from_raw(pick(1, 500000));
    try {
      switch (k) {
        case 0: ids.push_back(ledger.open_account(commit_identity("id" + std::to_string(pick(0, 1 << 30))), day)); break;
        case 1: ledger.deposit_fiat(any(), f, day); break;
        case 2: ledger.withdraw_fiat(any(), f, day); break;
        case 3: ledger.transfer_tokens(any(), any(), t, day); break;
        case 4: ledger.mint(pick(0, 1) ? Pool::Offered : Pool::Withheld, t, day); break;
        case 5: ledger.deliver(TxKind::TokenTransfer, pick(0, 1) ? Pool::Offered : Pool::Withheld, any(), t, day); break;
        case 6: ledger.lock_escrow(any(), pick(0, 1) ? t : Tokens{}, pick(0, 1) ? f : Pesos{}, day); break;
        case 7: ledger.release_escrow(any(), pick(0, 1) ? t : Tokens{}, pick(0, 1) ? f : Pesos{}, day); break;
        case 8: ledger.settle_escrow(pick(0, 1) ? TxKind::PurchaseSettle : TxKind::AuctionSettle, any(), f, day); break;
        case 9: ledger.burn_escrowed(any(), t, day); break;
        case 10: ledger.pay_fiat(TxKind::RedemptionPayout, any(), f, day); break;
        case 11: ledger.move_pool(Pool::Withheld, Pool::Offered, t, day); break;
      }
    } catch (const Error&) {
      // precondition failures leave the ledger untouched
    }
  }
};

struct Totals {
  Tokens tokens;  // users (balance + escrow) and pools
  Pesos fiat;     // users (balance + escrow)
};

Totals totals(const LedgerState& s) {
  Totals t;
  for (const auto& [id, a] : s.accounts) {
    t.tokens += a.tokens_held();
    t.fiat += a.fiat_balance + a.fiat_escrow;
  }
  t.tokens += s.pools.withheld + s.pools.offered;
  return t;
}

}  // namespace

TEST(LedgerProperty, ReplayReproducesLiveState) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Stream s(seed);
    for (Day d = 0; d < 15; ++d) {
      for (int i = 0; i < 25; ++i) s.op(d);
      s.ledger.seal_block(d);
    }
    const auto replayed = replay({}, parse_ledger(format_ledger(s.ledger.state().chain)));
    EXPECT_EQ(replayed, s.ledger.state()) << "seed " << seed;
    EXPECT_EQ(replayed.state_hash(), s.ledger.state().state_hash());
  }
}

TEST(LedgerProperty, BlocksConserveTokensAndFiat) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    Stream s(seed);
    for (Day d = 0; d < 10; ++d) {
      const Totals before = totals(s.ledger.state());
      for (int i = 0; i < 30; ++i) s.op(d);
      const auto& block = s.ledger.seal_block(d);
      const Totals after = totals(s.ledger.state());
      Tokens minted, burned;
      Pesos fiat_in, fiat_out;
      for (const auto& tx : block.txs) {
        if (tx.kind == TxKind::Mint) minted += tx.token_amount;
        if (tx.kind == TxKind::Burn) burned += tx.token_amount;
        if (tx.from == kSystem) fiat_in += tx.fiat_amount;
        if (tx.to == kSystem) fiat_out += tx.fiat_amount;
      }
      EXPECT_EQ(after.tokens - before.tokens, minted - burned) << "seed " << seed << " day " << d;
      EXPECT_EQ(after.fiat - before.fiat, fiat_in - fiat_out) << "seed " << seed << " day " << d;
      for (const auto& [id, a] : s.ledger.state().accounts) {
        EXPECT_FALSE(a.token_balance.is_negative() || a.token_escrow.is_negative() || a.fiat_balance.is_negative() ||
                     a.fiat_escrow.is_negative());
      }
    }
  }
}

TEST(LedgerProperty, EverySingleBitFlipIsDetected) {
  Stream s(77);
  for (Day d = 0; d < 3; ++d) {
    for (int i = 0; i < 6; ++i) s.op(d);
    s.ledger.seal_block(d);
  }
  const std::string text = format_ledger(s.ledger.state().chain);
  std::size_t undetected = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    for (int bit = 0; bit < 8; ++bit) {
      std::string mutated = text;
      mutated[pos] = static_cast<char>(mutated[pos] ^ (1 << bit));
      try {
        verify_chain(parse_ledger(mutated));
        ++undetected;
      } catch (const Error& e) {
        EXPECT_TRUE(e.code() == Errc::MalformedLedger || e.code() == Errc::BrokenChain);
      }
    }
  }
  EXPECT_EQ(undetected, 0u);
}

TEST(Ledger, DebitObserverSeesSpendableBalance) {
  Ledger l;
  const auto a = funded(l, "a", "10");
  const auto b = funded(l, "b", "0");
  std::vector<std::pair<AccountId, Tokens>> seen;
  l.set_debit_observer([&](const AccountId& id, Tokens t) { seen.emplace_back(id, t); });
  l.transfer_tokens(a, b, Tokens::units(3), 1);
  l.lock_escrow(a, Tokens::units(2), Pesos{}, 1);
  l.deposit_fiat(a, Pesos::units(1), 1);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0].second, Tokens::units(7));
  EXPECT_EQ(seen[1].second, Tokens::units(5));
}
