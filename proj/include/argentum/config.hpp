#pragma once

// Scenario description and its flat `key = value` file format.

#include "argentum/agents.hpp"
#include "argentum/fixed_point.hpp"
#include "argentum/issuance.hpp"
#include "argentum/payouts.hpp"
#include "argentum/series.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace argentum {

enum class ReturnsKind {
  Index,  // the returns file holds portfolio index levels
  Rate,   // the returns file holds per-day simple returns
};

struct ScenarioConfig {
  Day horizon_days = 0;
  std::uint64_t seed = 0;

  Series cpi;
  Series returns;        // index levels after loading, whatever the file held
  Series opportunities;  // sparse: days without a row have zero capacity

  Price base_price = Price::units(1);
  Value initial_value;
  Value initial_fund;
  Rate phi = Rate::parse("0.10");
  int phase_window = 30;
  bool fund_backstop = false;

  payouts::InterestPolicy interest;
  payouts::PremiumPolicy premium;
  issuance::RedemptionPolicy redemption;
  Rate transfer_fee;
  Rate max_account_share;  // zero disables the per-account creation limit

  int auction_day_of_month = 8;
  std::int64_t auction_lots = 0;  // zero sizes each auction from leftover opportunity capacity
  Tokens lot_size = Tokens::units(1);
  Rate gamma = Rate::parse("0.05");
  bool allow_mint = true;

  std::vector<agents::AgentProfile> roster;  // one entry per agent, counts expanded

  std::optional<Day> mass_redemption_day;
  bool mass_redemption_immediate = false;

  void validate() const;
};

/// Parses the key/value text. Series paths are resolved against `base_dir`.
/// Errc::InvalidConfig names the offending key or line.
ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace argentum
