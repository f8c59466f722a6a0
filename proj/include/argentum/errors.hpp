#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace argentum {

enum class Errc {
  // ledger
  ZeroCommitment,
  DuplicateIdentity,
  UnknownAccount,
  InvalidAccountId,
  InsufficientBalance,
  SelfTransfer,
  NonPositiveAmount,
  BrokenChain,
  InvalidTransaction,
  MalformedLedger,
  // treasury
  MissingCpi,
  EmptySupply,
  // issuance
  InsufficientFiat,
  InsufficientTokens,
  LiquidityExhausted,
  UnknownRequest,
  // auction
  InvalidBids,
  OfferedPoolShort,
  // payouts
  AlreadyMatured,
  NotMature,
  // inputs
  ParseError,
  NonAscendingDays,
  InvalidConfig,
};

std::string_view to_string(Errc code);

/// The single exception type thrown by the engine. `where` carries the
/// block height, sequence number, or line number the code refers to.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::optional<std::uint64_t> where = std::nullopt)
      : std::runtime_error(std::move(message)), code_(code), where_(where) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::uint64_t> where() const noexcept { return where_; }

 private:
  Errc code_;
  std::optional<std::uint64_t> where_;
};

}  // namespace argentum
