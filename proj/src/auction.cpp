#include "argentum/auction.hpp"

#include "argentum/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace argentum::auction {

void AuctionConfig::validate() const {
  if (lots < 0) throw Error(Errc::InvalidConfig, "lot count must be non-negative");
  if (!lot_size.is_positive()) throw Error(Errc::InvalidConfig, "lot size must be positive");
  if (base_price.is_negative()) throw Error(Errc::InvalidConfig, "base lot price must be non-negative");
  if (gamma.is_negative()) throw Error(Errc::InvalidConfig, "gamma must be non-negative");
}

Pesos lot_price(std::int64_t k, const AuctionConfig& config) {
  const Exact step = Exact::integer(1) + Exact::of(config.gamma) * Exact::integer(k - 1);
  return round_to<Pesos>(Exact::of(config.base_price) * step);
}

namespace {

struct Standing {
  const Bid* bid;
  std::int64_t won = 0;
  Pesos spent;
  Award award;
};

bool eligible(const Standing& s, const AuctionConfig& config, Pesos next_price) {
  if (s.bid->deposit - s.spent < next_price) return false;
  return !(Exact::of(s.bid->price_cap) * Exact::of(config.lot_size) < Exact::of(next_price));
}

// a / (s + 1) strictly above b / (t + 1); raws share a scale.
bool higher_quotient(const Standing& a, const Standing& b) {
  const int128 lhs = static_cast<int128>(a.bid->deposit.raw()) * (b.won + 1);
  const int128 rhs = static_cast<int128>(b.bid->deposit.raw()) * (a.won + 1);
  return lhs > rhs;
}

}  // namespace

AuctionResult run_auction(std::vector<Bid> bids, const AuctionConfig& config, std::uint64_t cohort_id) {
  config.validate();
  std::sort(bids.begin(), bids.end(), [](const Bid& a, const Bid& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.account < b.account;
  });
  std::set<AccountId> seen;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const Bid& b = bids[i];
    if (!b.deposit.is_positive()) throw Error(Errc::InvalidBids, "deposit must be positive for " + b.account);
    if (!b.price_cap.is_positive()) throw Error(Errc::InvalidBids, "price cap must be positive for " + b.account);
    if (i > 0 && bids[i - 1].timestamp == b.timestamp) throw Error(Errc::InvalidBids, "repeated timestamp");
    if (!seen.insert(b.account).second) throw Error(Errc::InvalidBids, "repeated account " + b.account);
  }

  std::vector<Standing> table;
  table.reserve(bids.size());
  for (const Bid& b : bids) table.push_back(Standing{&b, 0, Pesos{}, Award{}});

  AuctionResult result;
  result.cohort_id = cohort_id;
  // Cached next-lot price per distinct lot count keeps the ladder cheap.
  std::vector<Pesos> ladder;
  const auto price_of = [&](std::int64_t k) {
    while (static_cast<std::int64_t>(ladder.size()) < k) {
      ladder.push_back(lot_price(static_cast<std::int64_t>(ladder.size()) + 1, config));
    }
    return ladder[static_cast<std::size_t>(k - 1)];
  };

  while (result.lots_allocated < config.lots) {
    Standing* best = nullptr;
    for (Standing& s : table) {
      if (!eligible(s, config, price_of(s.won + 1))) continue;
      // Table order is timestamp order, so ties keep the earlier bidder.
      if (best == nullptr || higher_quotient(s, *best)) best = &s;
    }
    if (best == nullptr) break;
    const Pesos price = price_of(best->won + 1);
    best->won += 1;
    best->spent += price;
    best->award.prices.push_back(price);
    result.lots_allocated += 1;
  }

  for (Standing& s : table) {
    Award& a = s.award;
    a.account = s.bid->account;
    a.timestamp = s.bid->timestamp;
    a.deposit = s.bid->deposit;
    a.lots = s.won;
    a.charged = s.spent;
    a.refund = s.bid->deposit - s.spent;
    a.tokens = Tokens::from_raw(config.lot_size.raw() * s.won);
    result.awards.push_back(std::move(a));
  }
  return result;
}

std::int64_t provisionable_lots(const AuctionConfig& config, const treasury::TreasuryState& state, bool allow_mint) {
  if (allow_mint) return config.lots;
  const Tokens available = state.offered_supply + state.withheld_supply;
  return std::min<std::int64_t>(config.lots, available.raw() / config.lot_size.raw());
}

std::vector<ledger::Transaction> settle(const AuctionResult& result, const AuctionConfig& config, Day day,
                                        ledger::Ledger& book, treasury::Treasury& treasury, bool allow_mint) {
  const Tokens needed = Tokens::from_raw(config.lot_size.raw() * result.lots_allocated);
  const auto& st = treasury.state();
  if (!allow_mint && st.offered_supply + st.withheld_supply < needed) {
    throw Error(Errc::OfferedPoolShort, "cannot provision " + needed.to_string() + " tokens");
  }

  std::vector<ledger::Transaction> txs;
  const std::string memo = "cohort " + std::to_string(result.cohort_id);
  if (st.offered_supply < needed) {
    const Tokens from_withheld = min_of(needed - st.offered_supply, st.withheld_supply);
    if (from_withheld.is_positive()) {
      txs.push_back(book.move_pool(ledger::Pool::Withheld, ledger::Pool::Offered, from_withheld, day, memo));
      treasury.withheld_to_offered(from_withheld);
    }
    if (st.offered_supply < needed) {
      const Tokens minted = needed - st.offered_supply;
      txs.push_back(book.mint(ledger::Pool::Offered, minted, day, memo));
      treasury.mint_offered(minted);
    }
  }

  for (const Award& a : result.awards) {
    if (a.charged.is_positive()) {
      txs.push_back(book.settle_escrow(ledger::TxKind::AuctionSettle, a.account, a.charged, day, memo));
      treasury.add_backing(widen<Value>(a.charged));
    }
    if (a.refund.is_positive()) {
      txs.push_back(book.release_escrow(a.account, Tokens{}, a.refund, day, memo + " refund"));
    }
    if (a.tokens.is_positive()) {
      txs.push_back(book.deliver(ledger::TxKind::TokenTransfer, ledger::Pool::Offered, a.account, a.tokens, day, memo));
      treasury.deliver_offered(a.tokens);
    }
  }
  return txs;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<Bid> read_bids(std::istream& in) {
  std::string line;
  std::uint64_t n = 1;
  if (!std::getline(in, line)) throw Error(Errc::InvalidBids, "missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "account,deposit,price_cap,timestamp") throw Error(Errc::InvalidBids, "unexpected header", 1);
  std::vector<Bid> bids;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw Error(Errc::InvalidBids, "expected 4 fields", n);
    try {
      Bid b;
      b.account = f[0];
      if (b.account.empty() || b.account.size() > 64) throw Error(Errc::InvalidBids, "bad account id", n);
      b.deposit = Pesos::parse(f[1]);
      b.price_cap = Price::parse(f[2]);
      std::size_t used = 0;
      b.timestamp = std::stoll(f[3], &used);
      if (used != f[3].size()) throw Error(Errc::InvalidBids, "bad timestamp", n);
      if (!b.deposit.is_positive()) throw Error(Errc::InvalidBids, "deposit must be positive", n);
      if (!b.price_cap.is_positive()) throw Error(Errc::InvalidBids, "price cap must be positive", n);
      bids.push_back(std::move(b));
    } catch (const Error& e) {
      if (e.code() == Errc::InvalidBids) throw;
      throw Error(Errc::InvalidBids, e.what(), n);
    } catch (const std::exception& e) {
      throw Error(Errc::InvalidBids, "bad number: " + std::string(e.what()), n);
    }
  }
  return bids;
}

void write_result(std::ostream& out, const AuctionResult& result) {
  out << "account,lots,charged,refund,tokens\n";
  for (const Award& a : result.awards) {
    out << a.account << ',' << a.lots << ',' << a.charged.to_string() << ',' << a.refund.to_string() << ','
        << a.tokens.to_string() << '\n';
  }
}

}  // namespace argentum::auction
