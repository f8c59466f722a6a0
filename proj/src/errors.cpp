#include "argentum/errors.hpp"

#include "argentum/fixed_point.hpp"

namespace argentum {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::ZeroCommitment: return "ZeroCommitment";
    case Errc::DuplicateIdentity: return "DuplicateIdentity";
    case Errc::UnknownAccount: return "UnknownAccount";
    case Errc::InvalidAccountId: return "InvalidAccountId";
    case Errc::InsufficientBalance: return "InsufficientBalance";
    case Errc::SelfTransfer: return "SelfTransfer";
    case Errc::NonPositiveAmount: return "NonPositiveAmount";
    case Errc::BrokenChain: return "BrokenChain";
    case Errc::InvalidTransaction: return "InvalidTransaction";
    case Errc::MalformedLedger: return "MalformedLedger";
    case Errc::MissingCpi: return "MissingCpi";
    case Errc::EmptySupply: return "EmptySupply";
    case Errc::InsufficientFiat: return "InsufficientFiat";
    case Errc::InsufficientTokens: return "InsufficientTokens";
    case Errc::LiquidityExhausted: return "LiquidityExhausted";
    case Errc::UnknownRequest: return "UnknownRequest";
    case Errc::InvalidBids: return "InvalidBids";
    case Errc::OfferedPoolShort: return "OfferedPoolShort";
    case Errc::AlreadyMatured: return "AlreadyMatured";
    case Errc::NotMature: return "NotMature";
    case Errc::ParseError: return "ParseError";
    case Errc::NonAscendingDays: return "NonAscendingDays";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace detail {

std::string digits_to_decimal(const Wide& raw, int decimals) {
  const bool neg = raw < 0;
  Wide mag = neg ? Wide(-raw) : raw;
  std::string digits = mag.str();
  if (static_cast<int>(digits.size()) <= decimals) {
    digits.insert(0, static_cast<std::size_t>(decimals + 1) - digits.size(), '0');
  }
  std::string out;
  if (neg) out.push_back('-');
  if (decimals == 0) return out + digits;
  const std::size_t split = digits.size() - static_cast<std::size_t>(decimals);
  out.append(digits, 0, split);
  out.push_back('.');
  out.append(digits, split, std::string::npos);
  return out;
}

Wide parse_decimal(std::string_view text, int decimals, bool exact) {
  auto fail = [&] { return std::invalid_argument("not a decimal number: '" + std::string(text) + "'"); };
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && text[i] == '-') {
    neg = true;
    ++i;
  }
  const std::size_t int_begin = i;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  const std::string_view int_part = text.substr(int_begin, i - int_begin);
  std::string_view frac_part;
  bool has_point = false;
  if (i < text.size() && text[i] == '.') {
    has_point = true;
    ++i;
    const std::size_t frac_begin = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    frac_part = text.substr(frac_begin, i - frac_begin);
  }
  if (i != text.size() || int_part.empty() || (has_point && frac_part.empty())) throw fail();
  if (int_part.size() > 30) throw fail();
  if (exact) {
    // canonical: no redundant leading zeros, exactly `decimals` digits, no "-0.00"
    if (int_part.size() > 1 && int_part[0] == '0') throw fail();
    if (decimals == 0 ? has_point : (static_cast<int>(frac_part.size()) != decimals)) throw fail();
  }
  Wide value = 0;
  for (char c : int_part) value = value * 10 + (c - '0');
  Wide frac = 0;
  int used = 0;
  for (char c : frac_part) {
    frac = frac * 10 + (c - '0');
    ++used;
    if (used > 30) throw fail();
  }
  Wide num = value;
  for (int k = 0; k < used; ++k) num *= 10;
  num += frac;
  Wide den = 1;
  for (int k = 0; k < used; ++k) den *= 10;
  Wide scale = 1;
  for (int k = 0; k < decimals; ++k) scale *= 10;
  Wide raw = round_half_even(num * scale, den);
  if (exact && neg && raw == 0) throw fail();
  return neg ? Wide(-raw) : raw;
}

}  // namespace detail
}  // namespace argentum
