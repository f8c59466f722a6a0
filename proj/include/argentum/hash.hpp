#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace argentum {

using Hash256 = std::array<std::uint8_t, 32>;

Hash256 sha256(std::string_view data);

/// Lowercase hex, 64 characters.
std::string to_hex(const Hash256& h);

/// Strict: exactly 64 lowercase hex digits.
std::optional<Hash256> parse_hex(std::string_view text);

inline bool is_zero(const Hash256& h) {
  for (auto b : h) {
    if (b != 0) return false;
  }
  return true;
}

}  // namespace argentum
