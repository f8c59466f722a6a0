#pragma once

// Behavior models for the four user roles. Each agent owns a seeded random
// stream and turns what it can observe of its own accounts into intents;
// the engine filters and executes them.

#include "argentum/fixed_point.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace argentum::agents {

enum class Role { Saver, Recurrent, ConservativeInvestor, Corporate };
std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct AgentProfile {
  Role role = Role::Saver;
  Pesos monthly_deposit;
  Rate spend_fraction;   // share of spendable tokens sent to a peer each day
  Pesos lump_sum;
  Price price_cap;       // auction cap, AR$ per token
  int lock_days = 0;
  double withdraw_prob = 0.0;  // daily probability of a redemption
  Rate redeem_fraction = Rate::parse("0.10");
  Pesos initial_fiat;    // credited when the account opens
  bool immediate = false;

  void validate() const;
};

/// Per-agent stream: std::mt19937_64 seeded through std::seed_seq from the
/// scenario seed and the roster index. The draws below are written out so
/// the values do not depend on the standard library's distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n), by rejection. n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

enum class IntentKind {
  Deposit,     // AR$ arrive from outside and go straight into a purchase order
  PlaceOrder,  // purchase order paid from the fiat balance
  Bid,         // auction bid escrowed from the fiat balance
  Transfer,    // tokens to another roster member
  Redeem,
};
std::string_view to_string(IntentKind kind);

struct Intent {
  IntentKind kind = IntentKind::Deposit;
  std::size_t agent = 0;
  Pesos fiat;
  Tokens tokens;
  Price price_cap;
  std::size_t peer = 0;
  bool immediate = false;
};

struct Observation {
  Day day = 0;
  bool auction_today = false;
  Tokens spendable;
  Pesos fiat_balance;
  std::size_t roster_size = 1;
  Day premium_maturity_days = 0;
};

/// Memory an agent keeps between days.
struct AgentState {
  std::optional<Day> bid_day;
  bool exited = false;
};

std::vector<Intent> step_agent(const AgentProfile& profile, std::size_t index, const Observation& obs,
                               AgentState& state, Rng& rng);

}  // namespace argentum::agents
