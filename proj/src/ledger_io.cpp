#include "argentum/ledger.hpp"

#include <istream>
#include <algorithm>
#include <iterator>
#include <ostream>

namespace argentum::ledger {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Canonical non-negative integer: digits only, no leading zeros.
std::optional<std::uint64_t> parse_uint(std::string_view s) {
  if (s.empty() || s.size() > 19 || (s.size() > 1 && s[0] == '0')) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

Error malformed(std::size_t line_no, const std::string& why) {
  return Error(Errc::MalformedLedger, "line " + std::to_string(line_no) + ": " + why, line_no);
}

}  // namespace

Transaction parse_transaction(std::string_view line) {
  const auto f = split(line, '|');
  auto bad = [&](const std::string& why) { return std::invalid_argument("bad transaction line: " + why); };
  if (f.size() != 8) throw bad("expected 8 fields");
  Transaction tx;
  const auto seq = parse_uint(f[0]);
  const auto day = parse_uint(f[1]);
  const auto kind = parse_tx_kind(f[2]);
  if (!seq || !day || !kind) throw bad("seq/day/kind");
  tx.seq = *seq;
  tx.day = static_cast<Day>(*day);
  tx.kind = *kind;
  tx.from = std::string(f[3]);
  tx.to = std::string(f[4]);
  if (tx.from.empty() || tx.to.empty()) throw bad("empty participant");
  tx.token_amount = Tokens::parse_canonical(f[5]);
  tx.fiat_amount = Pesos::parse_canonical(f[6]);
  tx.memo = std::string(f[7]);
  if (serialize(tx) != line) throw bad("not canonical");
  return tx;
}

std::string format_ledger(const std::vector<Block>& chain) {
  std::string out;
  for (const Block& b : chain) {
    out += "B|" + std::to_string(b.height) + '|' + std::to_string(b.day) + '|' + to_hex(b.prev_hash) + '|' +
           to_hex(b.hash) + '\n';
    for (const Transaction& tx : b.txs) {
      out += serialize(tx);
      out += '\n';
    }
  }
  return out;
}

void write_ledger(std::ostream& out, const std::vector<Block>& chain) { out << format_ledger(chain); }

std::vector<Block> parse_ledger(std::string_view text) {
  std::vector<Block> chain;
  if (text.empty()) return chain;
  if (text.back() != '\n') throw malformed(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1,
                                           "missing final line feed");
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.substr(0, 2) == "B|") {
      const auto f = split(line, '|');
      if (f.size() != 5) throw malformed(line_no, "block header needs 5 fields");
      const auto height = parse_uint(f[1]);
      const auto day = parse_uint(f[2]);
      const auto prev = parse_hex(f[3]);
      const auto hash = parse_hex(f[4]);
      if (!height || !day || !prev || !hash) throw malformed(line_no, "bad block header");
      Block b;
      b.height = *height;
      b.day = static_cast<Day>(*day);
      b.prev_hash = *prev;
      b.hash = *hash;
      chain.push_back(std::move(b));
    } else {
      if (chain.empty()) throw malformed(line_no, "transaction before first block header");
      try {
        chain.back().txs.push_back(parse_transaction(line));
      } catch (const std::invalid_argument& e) {
        throw malformed(line_no, e.what());
      }
    }
  }
  return chain;
}

std::vector<Block> read_ledger(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_ledger(text);
}

}  // namespace argentum::ledger
