#pragma once

// Append-only, hash-chained ledger of named accounts.
//
// Every balance change is a Transaction. Transactions accumulate in a
// pending list and are sealed into SHA-256 linked blocks. `replay` rebuilds
// the account map from a chain using the same validation path as live
// operation, so a verified chain always reproduces the live state.
//
// Participants are user accounts plus three distinguished names:
//   SYSTEM           the treasury boundary (mint source, burn sink, portfolio cash)
//   SYSTEM:withheld  the withheld token pool
//   SYSTEM:offered   tokens provisioned for sale but not yet adjudicated

#include "argentum/errors.hpp"
#include "argentum/fixed_point.hpp"
#include "argentum/hash.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace argentum::ledger {

using AccountId = std::string;

inline constexpr std::string_view kSystem = "SYSTEM";
inline constexpr std::string_view kWithheld = "SYSTEM:withheld";
inline constexpr std::string_view kOffered = "SYSTEM:offered";

enum class Pool { Withheld, Offered };
std::string_view participant(Pool pool);

struct IdentityCommitment {
  Hash256 digest{};
  bool is_zero() const { return argentum::is_zero(digest); }
  auto operator<=>(const IdentityCommitment&) const = default;
};

/// Commitment to an off-ledger identity record (only its hash is stored).
IdentityCommitment commit_identity(std::string_view record);

struct Account {
  AccountId id;
  IdentityCommitment identity;
  Tokens token_balance;  // spendable
  Tokens token_escrow;   // locked for queued redemptions
  Pesos fiat_balance;
  Pesos fiat_escrow;     // locked for purchase orders and bids

  Tokens tokens_held() const { return token_balance + token_escrow; }
  bool operator==(const Account&) const = default;
};

enum class TxKind {
  AccountOpen,
  FiatDeposit,
  FiatWithdraw,
  TokenTransfer,
  Mint,
  Burn,
  EscrowLock,
  PurchaseSettle,
  AuctionSettle,
  OrderRefund,
  RedemptionPayout,
  InterestPayout,
  PremiumPayout,
  Fee,
  FundTransfer,
};

std::string_view to_string(TxKind kind);
std::optional<TxKind> parse_tx_kind(std::string_view text);

struct Transaction {
  std::uint64_t seq = 0;
  Day day = 0;
  TxKind kind = TxKind::TokenTransfer;
  std::string from;
  std::string to;
  Tokens token_amount;
  Pesos fiat_amount;
  std::string memo;

  bool operator==(const Transaction&) const = default;
};

/// `seq|day|kind|from|to|token_amount|fiat_amount|memo`, no line terminator.
std::string serialize(const Transaction& tx);

/// Inverse of serialize(); rejects anything that would not re-serialize to
/// the identical line.
Transaction parse_transaction(std::string_view line);

struct Block {
  std::uint64_t height = 0;
  Day day = 0;
  Hash256 prev_hash{};
  std::vector<Transaction> txs;
  Hash256 hash{};

  bool operator==(const Block&) const = default;
};

/// Bytes hashed for a block: `height|day|prev_hash_hex` LF, then one
/// serialized transaction per line, each LF-terminated.
std::string canonical_block(std::uint64_t height, Day day, const Hash256& prev_hash,
                            const std::vector<Transaction>& txs);

/// Seals `txs` (already ordered by seq) into a block linked to `prev_hash`.
Block seal_block(std::uint64_t height, Day day, const Hash256& prev_hash, std::vector<Transaction> txs);

struct SystemPools {
  Tokens withheld;
  Tokens offered;
  bool operator==(const SystemPools&) const = default;
};

struct LedgerState {
  std::map<AccountId, Account> accounts;
  SystemPools pools;
  std::vector<Block> chain;
  std::uint64_t next_seq = 0;

  /// Sum of tokens held by user accounts, escrow included.
  Tokens public_supply() const;

  /// SHA-256 over the sorted account map, pools and next_seq. Chain
  /// contents are excluded; they are covered by the block hashes.
  Hash256 state_hash() const;

  bool operator==(const LedgerState&) const = default;
};

/// Throws Errc::BrokenChain with the first height whose link or hash fails.
void verify_chain(const std::vector<Block>& chain);

class Ledger {
 public:
  using DebitObserver = std::function<void(const AccountId&, Tokens spendable)>;

  explicit Ledger(Rate transfer_fee = Rate{}, LedgerState genesis = {});

  AccountId open_account(const IdentityCommitment& identity, Day day);

  /// Moves spendable tokens between users. A nonzero transfer fee is charged
  /// on top of `amount` and routed to the withheld pool as a Fee transaction.
  std::vector<Transaction> transfer_tokens(const AccountId& from, const AccountId& to, Tokens amount,
                                           Day day);

  Transaction deposit_fiat(const AccountId& account, Pesos amount, Day day);
  Transaction withdraw_fiat(const AccountId& account, Pesos amount, Day day);

  Transaction mint(Pool pool, Tokens amount, Day day, std::string memo = {});
  Transaction burn_pool(Pool pool, Tokens amount, Day day, std::string memo = {});
  Transaction burn_escrowed(const AccountId& account, Tokens amount, Day day, std::string memo = {});
  Transaction move_pool(Pool from, Pool to, Tokens amount, Day day, std::string memo = {});

  Transaction lock_escrow(const AccountId& account, Tokens tokens, Pesos fiat, Day day,
                          std::string memo = {});
  /// OrderRefund: escrow back to the spendable balances.
  Transaction release_escrow(const AccountId& account, Tokens tokens, Pesos fiat, Day day,
                             std::string memo = {});
  /// PurchaseSettle / AuctionSettle: escrowed fiat to SYSTEM.
  Transaction settle_escrow(TxKind kind, const AccountId& account, Pesos fiat, Day day,
                            std::string memo = {});
  /// TokenTransfer / InterestPayout / PremiumPayout out of a system pool.
  Transaction deliver(TxKind kind, Pool pool, const AccountId& account, Tokens amount, Day day,
                      std::string memo = {});
  /// RedemptionPayout / InterestPayout / PremiumPayout in AR$ from SYSTEM.
  Transaction pay_fiat(TxKind kind, const AccountId& account, Pesos amount, Day day,
                       std::string memo = {});

  /// Seals all pending transactions (possibly none) into the next block.
  const Block& seal_block(Day day);

  /// Validates and applies one transaction. Used by every operation above
  /// and by replay; violations throw Errc::InvalidTransaction(seq).
  const Transaction& apply(Transaction tx);

  const LedgerState& state() const { return state_; }
  LedgerState snapshot() const { return state_; }
  const Account& account(const AccountId& id) const;
  bool has_account(const AccountId& id) const { return state_.accounts.count(id) != 0; }
  const std::vector<Transaction>& pending() const { return pending_; }
  Rate transfer_fee() const { return transfer_fee_; }

  void set_debit_observer(DebitObserver observer) { observer_ = std::move(observer); }

 private:
  Account& mutable_account(const AccountId& id, std::uint64_t seq);
  Tokens& pool_ref(std::string_view name, std::uint64_t seq);

  LedgerState state_;
  std::set<IdentityCommitment> identities_;
  std::vector<Transaction> pending_;
  Rate transfer_fee_;
  DebitObserver observer_;
};

/// Verifies `chain` and applies its transactions on top of `genesis`.
/// Errors: BrokenChain(height), InvalidTransaction(seq).
LedgerState replay(const LedgerState& genesis, const std::vector<Block>& chain);

/// Export: per block a `B|height|day|prev_hash_hex|hash_hex` line followed
/// by its transaction lines, all LF-terminated.
void write_ledger(std::ostream& out, const std::vector<Block>& chain);
std::string format_ledger(const std::vector<Block>& chain);

/// Parses an export. Throws Errc::MalformedLedger with the 1-based line
/// number. Hash links are not checked here; see verify_chain().
std::vector<Block> read_ledger(std::istream& in);
std::vector<Block> parse_ledger(std::string_view text);

}  // namespace argentum::ledger
