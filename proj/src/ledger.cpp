#include "argentum/ledger.hpp"

#include <algorithm>
#include <cstdio>

namespace argentum::ledger {
namespace {

constexpr std::size_t kMaxMemo = 128;

bool is_system_name(std::string_view name) { return name.substr(0, 6) == "SYSTEM"; }

bool is_pool_name(std::string_view name) { return name == kWithheld || name == kOffered; }

bool valid_account_id(std::string_view id) {
  if (id.empty() || id.size() > 64 || is_system_name(id)) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.';
  });
}

bool valid_memo(std::string_view memo) {
  if (memo.size() > kMaxMemo) return false;
  return std::all_of(memo.begin(), memo.end(), [](char c) { return c >= 0x20 && c < 0x7f && c != '|'; });
}

Error invalid(const Transaction& tx, const std::string& why) {
  return Error(Errc::InvalidTransaction, "transaction " + std::to_string(tx.seq) + " (" +
                                             std::string(to_string(tx.kind)) + "): " + why,
               tx.seq);
}

}  // namespace

std::string_view participant(Pool pool) { return pool == Pool::Withheld ? kWithheld : kOffered; }

IdentityCommitment commit_identity(std::string_view record) { return IdentityCommitment{sha256(record)}; }

std::string_view to_string(TxKind kind) {
  switch (kind) {
    case TxKind::AccountOpen: return "AccountOpen";
    case TxKind::FiatDeposit: return "FiatDeposit";
    case TxKind::FiatWithdraw: return "FiatWithdraw";
    case TxKind::TokenTransfer: return "TokenTransfer";
    case TxKind::Mint: return "Mint";
    case TxKind::Burn: return "Burn";
    case TxKind::EscrowLock: return "EscrowLock";
    case TxKind::PurchaseSettle: return "PurchaseSettle";
    case TxKind::AuctionSettle: return "AuctionSettle";
    case TxKind::OrderRefund: return "OrderRefund";
    case TxKind::RedemptionPayout: return "RedemptionPayout";
    case TxKind::InterestPayout: return "InterestPayout";
    case TxKind::PremiumPayout: return "PremiumPayout";
    case TxKind::Fee: return "Fee";
    case TxKind::FundTransfer: return "FundTransfer";
  }
  return "?";
}

std::optional<TxKind> parse_tx_kind(std::string_view text) {
  for (int k = 0; k <= static_cast<int>(TxKind::FundTransfer); ++k) {
    const auto kind = static_cast<TxKind>(k);
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::string serialize(const Transaction& tx) {
  std::string s;
  s.reserve(96 + tx.memo.size());
  s += std::to_string(tx.seq);
  s += '|';
  s += std::to_string(tx.day);
  s += '|';
  s += to_string(tx.kind);
  s += '|';
  s += tx.from;
  s += '|';
  s += tx.to;
  s += '|';
  s += tx.token_amount.to_string();
  s += '|';
  s += tx.fiat_amount.to_string();
  s += '|';
  s += tx.memo;
  return s;
}

std::string canonical_block(std::uint64_t height, Day day, const Hash256& prev_hash,
                            const std::vector<Transaction>& txs) {
  std::string s = std::to_string(height) + '|' + std::to_string(day) + '|' + to_hex(prev_hash) + '\n';
  for (const auto& tx : txs) {
    s += serialize(tx);
    s += '\n';
  }
  return s;
}

Block seal_block(std::uint64_t height, Day day, const Hash256& prev_hash, std::vector<Transaction> txs) {
  Block b;
  b.height = height;
  b.day = day;
  b.prev_hash = prev_hash;
  b.txs = std::move(txs);
  b.hash = sha256(canonical_block(b.height, b.day, b.prev_hash, b.txs));
  return b;
}

Tokens LedgerState::public_supply() const {
  Tokens total;
  for (const auto& [id, acct] : accounts) total += acct.tokens_held();
  return total;
}

Hash256 LedgerState::state_hash() const {
  std::string s;
  for (const auto& [id, a] : accounts) {
    s += "A|" + id + '|' + to_hex(a.identity.digest) + '|' + a.token_balance.to_string() + '|' +
         a.token_escrow.to_string() + '|' + a.fiat_balance.to_string() + '|' + a.fiat_escrow.to_string() + '\n';
  }
  s += "P|" + pools.withheld.to_string() + '|' + pools.offered.to_string() + '\n';
  s += "N|" + std::to_string(next_seq) + '\n';
  return sha256(s);
}

void verify_chain(const std::vector<Block>& chain) {
  Hash256 prev{};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Block& b = chain[i];
    const auto height = static_cast<std::uint64_t>(i);
    if (b.height != height) {
      throw Error(Errc::BrokenChain, "block " + std::to_string(i) + ": unexpected height " + std::to_string(b.height),
                  height);
    }
    if (b.prev_hash != prev) {
      throw Error(Errc::BrokenChain, "block " + std::to_string(i) + ": prev_hash does not link", height);
    }
    if (sha256(canonical_block(b.height, b.day, b.prev_hash, b.txs)) != b.hash) {
      throw Error(Errc::BrokenChain, "block " + std::to_string(i) + ": hash mismatch", height);
    }
    prev = b.hash;
  }
}

Ledger::Ledger(Rate transfer_fee, LedgerState genesis) : state_(std::move(genesis)), transfer_fee_(transfer_fee) {
  for (const auto& [id, acct] : state_.accounts) identities_.insert(acct.identity);
}

const Account& Ledger::account(const AccountId& id) const {
  auto it = state_.accounts.find(id);
  if (it == state_.accounts.end()) throw Error(Errc::UnknownAccount, "unknown account '" + id + "'");
  return it->second;
}

Account& Ledger::mutable_account(const AccountId& id, std::uint64_t seq) {
  auto it = state_.accounts.find(id);
  if (it == state_.accounts.end()) {
    throw Error(Errc::InvalidTransaction, "transaction " + std::to_string(seq) + ": unknown account '" + id + "'",
                seq);
  }
  return it->second;
}

Tokens& Ledger::pool_ref(std::string_view name, std::uint64_t seq) {
  if (name == kWithheld) return state_.pools.withheld;
  if (name == kOffered) return state_.pools.offered;
  throw Error(Errc::InvalidTransaction, "transaction " + std::to_string(seq) + ": not a pool", seq);
}

const Transaction& Ledger::apply(Transaction tx) {
  if (tx.seq != state_.next_seq) throw invalid(tx, "expected seq " + std::to_string(state_.next_seq));
  if (tx.day < 0) throw invalid(tx, "negative day");
  if (!valid_memo(tx.memo)) throw invalid(tx, "bad memo");
  if (tx.token_amount.is_negative() || tx.fiat_amount.is_negative()) throw invalid(tx, "negative amount");
  const bool moves_tokens = tx.token_amount.is_positive();
  const bool moves_fiat = tx.fiat_amount.is_positive();
  if (tx.kind != TxKind::AccountOpen && !moves_tokens && !moves_fiat) throw invalid(tx, "zero amounts");

  auto require = [&](bool cond, const char* why) {
    if (!cond) throw invalid(tx, why);
  };
  auto tokens_only = [&] { require(!moves_fiat, "unexpected fiat amount"); };
  auto fiat_only = [&] { require(!moves_tokens, "unexpected token amount"); };
  auto debit = [&](Tokens& slot, Tokens amount) {
    require(slot >= amount, "insufficient tokens");
    slot -= amount;
  };
  auto debit_fiat = [&](Pesos& slot, Pesos amount) {
    require(slot >= amount, "insufficient fiat");
    slot -= amount;
  };
  std::optional<AccountId> debited;

  switch (tx.kind) {
    case TxKind::AccountOpen: {
      require(tx.from == kSystem, "must originate from SYSTEM");
      require(valid_account_id(tx.to), "invalid account id");
      require(!moves_tokens && !moves_fiat, "account open carries no amounts");
      require(state_.accounts.count(tx.to) == 0, "account exists");
      auto digest = parse_hex(tx.memo);
      require(digest.has_value(), "memo must be the identity commitment");
      IdentityCommitment identity{*digest};
      require(!identity.is_zero(), "zero commitment");
      require(identities_.count(identity) == 0, "duplicate identity");
      identities_.insert(identity);
      state_.accounts.emplace(tx.to, Account{tx.to, identity, {}, {}, {}, {}});
      break;
    }
    case TxKind::FiatDeposit: {
      fiat_only();
      require(tx.from == kSystem, "deposit must come from SYSTEM");
      mutable_account(tx.to, tx.seq).fiat_balance += tx.fiat_amount;
      break;
    }
    case TxKind::FiatWithdraw: {
      fiat_only();
      require(tx.to == kSystem, "withdrawal must go to SYSTEM");
      debit_fiat(mutable_account(tx.from, tx.seq).fiat_balance, tx.fiat_amount);
      break;
    }
    case TxKind::TokenTransfer: {
      tokens_only();
      require(!is_system_name(tx.to), "transfer target must be a user account");
      require(tx.from != tx.to, "self transfer");
      Account& dst = mutable_account(tx.to, tx.seq);
      if (is_pool_name(tx.from)) {
        debit(pool_ref(tx.from, tx.seq), tx.token_amount);
      } else {
        debit(mutable_account(tx.from, tx.seq).token_balance, tx.token_amount);
        debited = tx.from;
      }
      dst.token_balance += tx.token_amount;
      break;
    }
    case TxKind::Mint: {
      tokens_only();
      require(tx.from == kSystem && is_pool_name(tx.to), "mint goes from SYSTEM into a pool");
      pool_ref(tx.to, tx.seq) += tx.token_amount;
      break;
    }
    case TxKind::Burn: {
      tokens_only();
      require(tx.to == kSystem, "burn goes to SYSTEM");
      if (is_pool_name(tx.from)) {
        debit(pool_ref(tx.from, tx.seq), tx.token_amount);
      } else {
        debit(mutable_account(tx.from, tx.seq).token_escrow, tx.token_amount);
      }
      break;
    }
    case TxKind::EscrowLock: {
      require(tx.from == tx.to && !is_system_name(tx.from), "escrow is account-internal");
      Account& a = mutable_account(tx.from, tx.seq);
      require(a.token_balance >= tx.token_amount && a.fiat_balance >= tx.fiat_amount, "insufficient balance");
      debit(a.token_balance, tx.token_amount);
      debit_fiat(a.fiat_balance, tx.fiat_amount);
      a.token_escrow += tx.token_amount;
      a.fiat_escrow += tx.fiat_amount;
      if (moves_tokens) debited = tx.from;
      break;
    }
    case TxKind::PurchaseSettle:
    case TxKind::AuctionSettle: {
      fiat_only();
      require(tx.to == kSystem, "settlement goes to SYSTEM");
      debit_fiat(mutable_account(tx.from, tx.seq).fiat_escrow, tx.fiat_amount);
      break;
    }
    case TxKind::OrderRefund: {
      require(tx.from == tx.to && !is_system_name(tx.from), "refund is account-internal");
      Account& a = mutable_account(tx.from, tx.seq);
      require(a.token_escrow >= tx.token_amount && a.fiat_escrow >= tx.fiat_amount, "insufficient escrow");
      debit(a.token_escrow, tx.token_amount);
      debit_fiat(a.fiat_escrow, tx.fiat_amount);
      a.token_balance += tx.token_amount;
      a.fiat_balance += tx.fiat_amount;
      break;
    }
    case TxKind::RedemptionPayout: {
      fiat_only();
      require(tx.from == kSystem, "payout comes from SYSTEM");
      mutable_account(tx.to, tx.seq).fiat_balance += tx.fiat_amount;
      break;
    }
    case TxKind::InterestPayout:
    case TxKind::PremiumPayout: {
      require(moves_tokens != moves_fiat, "payout is either tokens or fiat");
      require(!is_system_name(tx.to), "payout goes to a user");
      Account& dst = mutable_account(tx.to, tx.seq);
      if (moves_tokens) {
        require(is_pool_name(tx.from), "token payout comes from a pool");
        debit(pool_ref(tx.from, tx.seq), tx.token_amount);
        dst.token_balance += tx.token_amount;
      } else {
        require(tx.from == kSystem, "fiat payout comes from SYSTEM");
        dst.fiat_balance += tx.fiat_amount;
      }
      break;
    }
    case TxKind::Fee: {
      tokens_only();
      require(tx.to == kWithheld, "fees go to the withheld pool");
      debit(mutable_account(tx.from, tx.seq).token_balance, tx.token_amount);
      state_.pools.withheld += tx.token_amount;
      debited = tx.from;
      break;
    }
    case TxKind::FundTransfer: {
      tokens_only();
      require(is_pool_name(tx.from) && is_pool_name(tx.to) && tx.from != tx.to, "pool to pool");
      debit(pool_ref(tx.from, tx.seq), tx.token_amount);
      pool_ref(tx.to, tx.seq) += tx.token_amount;
      break;
    }
  }

  ++state_.next_seq;
  pending_.push_back(std::move(tx));
  if (debited && observer_) observer_(*debited, state_.accounts.at(*debited).token_balance);
  return pending_.back();
}

AccountId Ledger::open_account(const IdentityCommitment& identity, Day day) {
  if (identity.is_zero()) throw Error(Errc::ZeroCommitment, "identity commitment is zero");
  if (identities_.count(identity) != 0) throw Error(Errc::DuplicateIdentity, "identity already has an account");
  std::size_t n = state_.accounts.size() + 1;
  AccountId id;
  do {
    char buf[32];
    std::snprintf(buf, sizeof buf, "acct-%06zu", n++);
    id = buf;
  } while (state_.accounts.count(id) != 0);
  apply(Transaction{state_.next_seq, day, TxKind::AccountOpen, std::string(kSystem), id, {}, {},
                    to_hex(identity.digest)});
  return id;
}

std::vector<Transaction> Ledger::transfer_tokens(const AccountId& from, const AccountId& to, Tokens amount, Day day) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "transfer amount must be positive");
  if (from == to) throw Error(Errc::SelfTransfer, "cannot transfer to self");
  const Account& src = account(from);
  account(to);
  const Tokens fee = round_to<Tokens>(Exact::of(amount) * Exact::of(transfer_fee_));
  if (src.token_balance < amount + fee) {
    throw Error(Errc::InsufficientBalance, "balance " + src.token_balance.to_string() + " < " +
                                               (amount + fee).to_string());
  }
  std::vector<Transaction> out;
  out.push_back(apply(Transaction{state_.next_seq, day, TxKind::TokenTransfer, from, to, amount, {}, {}}));
  if (fee.is_positive()) {
    out.push_back(apply(Transaction{state_.next_seq, day, TxKind::Fee, from, std::string(kWithheld), fee, {},
                                    "transfer fee"}));
  }
  return out;
}

Transaction Ledger::deposit_fiat(const AccountId& account_id, Pesos amount, Day day) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "deposit must be positive");
  account(account_id);
  return apply(Transaction{state_.next_seq, day, TxKind::FiatDeposit, std::string(kSystem), account_id, {}, amount, {}});
}

Transaction Ledger::withdraw_fiat(const AccountId& account_id, Pesos amount, Day day) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "withdrawal must be positive");
  if (account(account_id).fiat_balance < amount) throw Error(Errc::InsufficientFiat, "fiat balance too low");
  return apply(Transaction{state_.next_seq, day, TxKind::FiatWithdraw, account_id, std::string(kSystem), {}, amount, {}});
}

Transaction Ledger::mint(Pool pool, Tokens amount, Day day, std::string memo) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "mint must be positive");
  return apply(Transaction{state_.next_seq, day, TxKind::Mint, std::string(kSystem), std::string(participant(pool)),
                           amount, {}, std::move(memo)});
}

Transaction Ledger::burn_pool(Pool pool, Tokens amount, Day day, std::string memo) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "burn must be positive");
  const Tokens held = pool == Pool::Withheld ? state_.pools.withheld : state_.pools.offered;
  if (held < amount) throw Error(Errc::InsufficientBalance, "pool holds " + held.to_string());
  return apply(Transaction{state_.next_seq, day, TxKind::Burn, std::string(participant(pool)), std::string(kSystem),
                           amount, {}, std::move(memo)});
}

Transaction Ledger::burn_escrowed(const AccountId& account_id, Tokens amount, Day day, std::string memo) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "burn must be positive");
  if (account(account_id).token_escrow < amount) throw Error(Errc::InsufficientBalance, "escrow too small");
  return apply(Transaction{state_.next_seq, day, TxKind::Burn, account_id, std::string(kSystem), amount, {},
                           std::move(memo)});
}

Transaction Ledger::move_pool(Pool from, Pool to, Tokens amount, Day day, std::string memo) {
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "fund transfer must be positive");
  return apply(Transaction{state_.next_seq, day, TxKind::FundTransfer, std::string(participant(from)),
                           std::string(participant(to)), amount, {}, std::move(memo)});
}

Transaction Ledger::lock_escrow(const AccountId& account_id, Tokens tokens, Pesos fiat, Day day, std::string memo) {
  if (tokens.is_negative() || fiat.is_negative() || (tokens.is_zero() && fiat.is_zero())) {
    throw Error(Errc::NonPositiveAmount, "escrow amount must be positive");
  }
  const Account& a = account(account_id);
  if (a.token_balance < tokens) throw Error(Errc::InsufficientTokens, "spendable tokens too low");
  if (a.fiat_balance < fiat) throw Error(Errc::InsufficientFiat, "fiat balance too low");
  return apply(Transaction{state_.next_seq, day, TxKind::EscrowLock, account_id, account_id, tokens, fiat,
                           std::move(memo)});
}

Transaction Ledger::release_escrow(const AccountId& account_id, Tokens tokens, Pesos fiat, Day day,
                                   std::string memo) {
  if (tokens.is_negative() || fiat.is_negative() || (tokens.is_zero() && fiat.is_zero())) {
    throw Error(Errc::NonPositiveAmount, "refund amount must be positive");
  }
  const Account& a = account(account_id);
  if (a.token_escrow < tokens || a.fiat_escrow < fiat) throw Error(Errc::InsufficientBalance, "escrow too small");
  return apply(Transaction{state_.next_seq, day, TxKind::OrderRefund, account_id, account_id, tokens, fiat,
                           std::move(memo)});
}

Transaction Ledger::settle_escrow(TxKind kind, const AccountId& account_id, Pesos fiat, Day day, std::string memo) {
  if (kind != TxKind::PurchaseSettle && kind != TxKind::AuctionSettle) {
    throw std::invalid_argument("settle_escrow: kind must be PurchaseSettle or AuctionSettle");
  }
  if (!fiat.is_positive()) throw Error(Errc::NonPositiveAmount, "settlement must be positive");
  if (account(account_id).fiat_escrow < fiat) throw Error(Errc::InsufficientBalance, "escrow too small");
  return apply(Transaction{state_.next_seq, day, kind, account_id, std::string(kSystem), {}, fiat, std::move(memo)});
}

Transaction Ledger::deliver(TxKind kind, Pool pool, const AccountId& account_id, Tokens amount, Day day,
                            std::string memo) {
  if (kind != TxKind::TokenTransfer && kind != TxKind::InterestPayout && kind != TxKind::PremiumPayout) {
    throw std::invalid_argument("deliver: unsupported kind");
  }
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "delivery must be positive");
  account(account_id);
  const Tokens held = pool == Pool::Withheld ? state_.pools.withheld : state_.pools.offered;
  if (held < amount) throw Error(Errc::InsufficientBalance, "pool holds " + held.to_string());
  return apply(Transaction{state_.next_seq, day, kind, std::string(participant(pool)), account_id, amount, {},
                           std::move(memo)});
}

Transaction Ledger::pay_fiat(TxKind kind, const AccountId& account_id, Pesos amount, Day day, std::string memo) {
  if (kind != TxKind::RedemptionPayout && kind != TxKind::InterestPayout && kind != TxKind::PremiumPayout) {
    throw std::invalid_argument("pay_fiat: unsupported kind");
  }
  if (!amount.is_positive()) throw Error(Errc::NonPositiveAmount, "payout must be positive");
  account(account_id);
  return apply(Transaction{state_.next_seq, day, kind, std::string(kSystem), account_id, {}, amount, std::move(memo)});
}

const Block& Ledger::seal_block(Day day) {
  const auto height = static_cast<std::uint64_t>(state_.chain.size());
  const Hash256 prev = state_.chain.empty() ? Hash256{} : state_.chain.back().hash;
  state_.chain.push_back(argentum::ledger::seal_block(height, day, prev, std::move(pending_)));
  pending_.clear();
  return state_.chain.back();
}

LedgerState replay(const LedgerState& genesis, const std::vector<Block>& chain) {
  verify_chain(chain);
  LedgerState base = genesis;
  base.chain.clear();
  Ledger ledger(Rate{}, std::move(base));
  for (const Block& block : chain) {
    for (const Transaction& tx : block.txs) ledger.apply(tx);
  }
  LedgerState out = ledger.snapshot();
  out.chain = chain;
  return out;
}

}  // namespace argentum::ledger
