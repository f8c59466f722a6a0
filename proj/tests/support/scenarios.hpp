#pragma once

// Scenario builders shared by the unit and acceptance suites.

#include "argentum/config.hpp"
#include "argentum/simulator.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace testing_support {

using namespace argentum;

inline std::string scenario_path(const std::string& name) { return std::string(SCENARIO_DIR) + "/" + name; }

inline Series step_series(std::vector<std::pair<Day, SeriesValue>> pts) {
  return Series(Series::Fill::StepHold, std::move(pts));
}

/// Days 0..horizon-1 each with the same capacity.
inline Series daily_capacity(Day horizon, const char* value) {
  std::vector<std::pair<Day, SeriesValue>> pts;
  for (Day d = 0; d < horizon; ++d) pts.emplace_back(d, SeriesValue::parse(value));
  return Series(Series::Fill::Sparse, std::move(pts));
}

/// Flat CPI, flat portfolio, no agents.
inline ScenarioConfig quiet(Day horizon, const char* initial_value = "1000") {
  ScenarioConfig c;
  c.horizon_days = horizon;
  c.cpi = Series::constant(SeriesValue::units(100));
  c.returns = Series::constant(SeriesValue::units(1));
  c.initial_value = Value::parse(initial_value);
  return c;
}

class Dice {
 public:
  explicit Dice(std::uint64_t seed) : g_(seed) {}
  std::int64_t between(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(g_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  bool chance(double p) { return real(0, 1) < p; }

 private:
  std::mt19937_64 g_;
};

/// Monthly CPI steps, each move drawn from [-5%, +5%], levels kept at four
/// decimals.
inline Series random_cpi(Dice& dice, Day horizon) {
  std::vector<std::pair<Day, SeriesValue>> pts;
  std::int64_t level = 1000000;  // 100.0000 in 1e-4 units
  for (Day d = 0; d < horizon; d += 30) {
    pts.emplace_back(d, SeriesValue::from_raw(level * 10000));
    const std::int64_t bp = dice.between(-500, 500);  // basis points
    level = std::max<std::int64_t>(1, level + level * bp / 10000);
  }
  return step_series(std::move(pts));
}

/// Daily index levels from returns in [-3%, +3%], with the odd crash.
inline Series random_returns(Dice& dice, Day horizon) {
  std::vector<std::pair<Day, SeriesValue>> rates;
  for (Day d = 0; d < horizon; ++d) {
    std::int64_t bp = d == 0 ? 0 : dice.between(-300, 300);
    if (d > 0 && dice.chance(0.01)) bp = -dice.between(1000, 5000);
    rates.emplace_back(d, SeriesValue::from_raw(bp * 10000));
  }
  return compound_returns(Series(Series::Fill::StepHold, std::move(rates)), horizon);
}

inline agents::AgentProfile random_agent(Dice& dice) {
  agents::AgentProfile p;
  p.role = static_cast<agents::Role>(dice.between(0, 3));
  p.monthly_deposit = Pesos::units(dice.between(0, 2000));
  p.spend_fraction = Rate::from_raw(dice.between(0, 200) * 1000000);  // up to 20%
  p.lump_sum = Pesos::units(dice.between(100, 50000));
  p.price_cap = Price::from_raw(dice.between(50, 300) * 1000000);      // 0.50 .. 3.00
  p.lock_days = static_cast<int>(dice.between(0, 200));
  p.withdraw_prob = dice.real(0, 0.2);
  p.redeem_fraction = Rate::from_raw(dice.between(0, 1000) * 1000000);
  p.initial_fiat = p.role == agents::Role::ConservativeInvestor || p.role == agents::Role::Corporate
                       ? p.lump_sum
                       : Pesos::units(dice.between(0, 1000));
  p.immediate = dice.chance(0.5);
  return p;
}

/// A full random scenario: CPI, returns, opportunities, policies, roster.
inline ScenarioConfig random_scenario(std::uint64_t seed, Day min_horizon = 60, Day max_horizon = 150) {
  Dice dice(seed);
  ScenarioConfig c;
  c.horizon_days = dice.between(min_horizon, max_horizon);
  c.seed = seed;
  c.cpi = random_cpi(dice, c.horizon_days);
  c.returns = random_returns(dice, c.horizon_days);
  std::vector<std::pair<Day, SeriesValue>> opp;
  for (Day d = 0; d < c.horizon_days; ++d) {
    if (dice.chance(0.7)) opp.emplace_back(d, SeriesValue::units(dice.between(0, 20000)));
  }
  c.opportunities = Series(Series::Fill::Sparse, std::move(opp));
  c.base_price = Price::from_raw(dice.between(50, 500) * 1000000);
  c.initial_value = Value::units(dice.between(1000, 100000));
  c.phi = Rate::from_raw(dice.between(0, 300) * 1000000);
  c.phase_window = static_cast<int>(dice.between(1, 45));
  c.fund_backstop = dice.chance(0.5);
  c.premium.semester_days = static_cast<int>(dice.between(1, 6));
  c.redemption.reserve_ratio = Rate::from_raw(dice.between(1, 500) * 1000000);
  c.transfer_fee = Rate::from_raw(dice.between(0, 5) * 1000000);
  c.auction_day_of_month = static_cast<int>(dice.between(1, 30));
  c.auction_lots = dice.chance(0.5) ? 0 : dice.between(1, 200);
  c.lot_size = Tokens::units(dice.between(1, 20));
  c.gamma = Rate::from_raw(dice.between(0, 200) * 1000000);
  c.allow_mint = dice.chance(0.7);
  const auto n = dice.between(0, 8);
  for (std::int64_t i = 0; i < n; ++i) c.roster.push_back(random_agent(dice));
  if (dice.chance(0.2)) {
    c.mass_redemption_day = dice.between(0, c.horizon_days - 1);
    c.mass_redemption_immediate = dice.chance(0.5);
  }
  return c;
}

}  // namespace testing_support
