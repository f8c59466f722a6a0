#include "argentum/config.hpp"

#include "argentum/errors.hpp"

#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <set>

namespace argentum {

void ScenarioConfig::validate() const {
  if (horizon_days < 1) throw Error(Errc::InvalidConfig, "horizon_days: must be at least 1");
  if (cpi.empty() || !cpi.at(0)) throw Error(Errc::InvalidConfig, "series.cpi: needs a value at day 0");
  if (returns.empty() || !returns.at(0)) throw Error(Errc::InvalidConfig, "series.returns: needs a value at day 0");
  for (const auto& [d, v] : cpi.points()) {
    if (!v.is_positive()) throw Error(Errc::InvalidConfig, "series.cpi: values must be positive");
  }
  for (const auto& [d, v] : returns.points()) {
    if (!v.is_positive()) throw Error(Errc::InvalidConfig, "series.returns: index levels must be positive");
  }
  for (const auto& [d, v] : opportunities.points()) {
    if (v.is_negative()) throw Error(Errc::InvalidConfig, "series.opportunities: capacity must be non-negative");
  }
  if (!base_price.is_positive()) throw Error(Errc::InvalidConfig, "treasury.base_price: must be positive");
  if (initial_value.is_negative() || initial_fund.is_negative() || initial_value < initial_fund) {
    throw Error(Errc::InvalidConfig, "treasury.initial_fund: need initial_value >= initial_fund >= 0");
  }
  if (phi.is_negative() || Rate::units(1) < phi) throw Error(Errc::InvalidConfig, "treasury.phi: must lie in [0, 1]");
  if (phase_window < 1) throw Error(Errc::InvalidConfig, "treasury.phase_window: must be at least 1");
  interest.validate();
  premium.validate();
  redemption.validate();
  if (transfer_fee.is_negative() || !(transfer_fee < Rate::units(1))) {
    throw Error(Errc::InvalidConfig, "policy.transfer.fee: must lie in [0, 1)");
  }
  if (max_account_share.is_negative() || Rate::units(1) < max_account_share) {
    throw Error(Errc::InvalidConfig, "policy.creation.max_account_share: must lie in [0, 1]");
  }
  if (auction_day_of_month < 1 || auction_day_of_month > 30) {
    throw Error(Errc::InvalidConfig, "auction.day_of_month: must lie in [1, 30]");
  }
  if (auction_lots < 0) throw Error(Errc::InvalidConfig, "auction.lots: must be non-negative");
  if (!lot_size.is_positive()) throw Error(Errc::InvalidConfig, "auction.lot_size: must be positive");
  if (gamma.is_negative()) throw Error(Errc::InvalidConfig, "auction.gamma: must be non-negative");
  for (const auto& a : roster) a.validate();
  if (mass_redemption_day && *mass_redemption_day < 0) {
    throw Error(Errc::InvalidConfig, "script.mass_redemption_day: must be non-negative");
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw Error(Errc::InvalidConfig, key + ": not an integer: " + v);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(Errc::InvalidConfig, key + ": expected true or false");
}

template <typename F>
F parse_fixed(const std::string& key, const std::string& v) {
  try {
    return F::parse(v);
  } catch (const std::exception&) {
    throw Error(Errc::InvalidConfig, key + ": not a decimal number: " + v);
  }
}

double parse_probability(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double p = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return p;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidConfig, key + ": not a number: " + v);
  }
}

Series load_keyed(const std::string& key, const std::filesystem::path& path, Series::Fill fill) {
  try {
    return load_series(path.string(), fill);
  } catch (const Error& e) {
    throw Error(Errc::InvalidConfig, key + ": " + e.what(), e.where());
  }
}

struct AgentEntry {
  agents::AgentProfile profile;
  int count = 1;
  bool has_role = false;
  bool has_initial_fiat = false;
};

void set_agent_field(AgentEntry& a, const std::string& key, const std::string& field, const std::string& v) {
  auto& p = a.profile;
  if (field == "role") {
    const auto r = agents::parse_role(v);
    if (!r) throw Error(Errc::InvalidConfig, key + ": unknown role '" + v + "'");
    p.role = *r;
    a.has_role = true;
  } else if (field == "count") {
    a.count = parse_int<int>(key, v);
    if (a.count < 1) throw Error(Errc::InvalidConfig, key + ": must be at least 1");
  } else if (field == "monthly_deposit") {
    p.monthly_deposit = parse_fixed<Pesos>(key, v);
  } else if (field == "spend_fraction") {
    p.spend_fraction = parse_fixed<Rate>(key, v);
  } else if (field == "lump_sum") {
    p.lump_sum = parse_fixed<Pesos>(key, v);
  } else if (field == "price_cap") {
    p.price_cap = parse_fixed<Price>(key, v);
  } else if (field == "lock_days") {
    p.lock_days = parse_int<int>(key, v);
  } else if (field == "withdraw_prob") {
    p.withdraw_prob = parse_probability(key, v);
  } else if (field == "redeem_fraction") {
    p.redeem_fraction = parse_fixed<Rate>(key, v);
  } else if (field == "initial_fiat") {
    p.initial_fiat = parse_fixed<Pesos>(key, v);
    a.has_initial_fiat = true;
  } else if (field == "immediate") {
    p.immediate = parse_bool(key, v);
  } else {
    throw Error(Errc::InvalidConfig, key + ": unknown agent field");
  }
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  std::map<std::string, std::string> kv;
  std::string line;
  std::uint64_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(Errc::InvalidConfig, "line " + std::to_string(n) + ": expected key = value", n);
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw Error(Errc::InvalidConfig, "line " + std::to_string(n) + ": empty key", n);
    if (!kv.emplace(key, value).second) throw Error(Errc::InvalidConfig, key + ": given twice", n);
  }

  const auto resolve = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };

  std::map<long, AgentEntry> agent_entries;
  std::optional<std::string> returns_path;
  ReturnsKind returns_kind = ReturnsKind::Index;
  bool have_cpi = false;

  for (const auto& [key, v] : kv) {
    if (key == "horizon_days") c.horizon_days = parse_int<Day>(key, v);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "series.cpi") { c.cpi = load_keyed(key, resolve(v), Series::Fill::StepHold); have_cpi = true; }
    else if (key == "series.returns") returns_path = v;
    else if (key == "series.returns_kind") {
      if (v == "index") returns_kind = ReturnsKind::Index;
      else if (v == "rate") returns_kind = ReturnsKind::Rate;
      else throw Error(Errc::InvalidConfig, key + ": expected index or rate");
    }
    else if (key == "series.opportunities") c.opportunities = load_keyed(key, resolve(v), Series::Fill::Sparse);
    else if (key == "treasury.base_price") c.base_price = parse_fixed<Price>(key, v);
    else if (key == "treasury.initial_value") c.initial_value = parse_fixed<Value>(key, v);
    else if (key == "treasury.initial_fund") c.initial_fund = parse_fixed<Value>(key, v);
    else if (key == "treasury.phi") c.phi = parse_fixed<Rate>(key, v);
    else if (key == "treasury.phase_window") c.phase_window = parse_int<int>(key, v);
    else if (key == "treasury.fund_backstop") c.fund_backstop = parse_bool(key, v);
    else if (key == "policy.interest.rate") c.interest.rate = parse_fixed<Rate>(key, v);
    else if (key == "policy.interest.period_days") c.interest.period_days = parse_int<int>(key, v);
    else if (key == "policy.premium.rate") c.premium.rate = parse_fixed<Rate>(key, v);
    else if (key == "policy.premium.semesters") c.premium.semesters = parse_int<int>(key, v);
    else if (key == "policy.premium.semester_days") c.premium.semester_days = parse_int<int>(key, v);
    else if (key == "policy.redemption.rho") c.redemption.reserve_ratio = parse_fixed<Rate>(key, v);
    else if (key == "policy.redemption.period_days") c.redemption.period_days = parse_int<int>(key, v);
    else if (key == "policy.redemption.fee") c.redemption.exit_fee = parse_fixed<Rate>(key, v);
    else if (key == "policy.redemption.escalated_fee") c.redemption.escalated_fee = parse_fixed<Rate>(key, v);
    else if (key == "policy.redemption.hold_days") c.redemption.hold_days = parse_int<int>(key, v);
    else if (key == "policy.transfer.fee") c.transfer_fee = parse_fixed<Rate>(key, v);
    else if (key == "policy.creation.max_account_share") c.max_account_share = parse_fixed<Rate>(key, v);
    else if (key == "auction.day_of_month") c.auction_day_of_month = parse_int<int>(key, v);
    else if (key == "auction.lots") c.auction_lots = parse_int<std::int64_t>(key, v);
    else if (key == "auction.lot_size") c.lot_size = parse_fixed<Tokens>(key, v);
    else if (key == "auction.gamma") c.gamma = parse_fixed<Rate>(key, v);
    else if (key == "auction.allow_mint") c.allow_mint = parse_bool(key, v);
    else if (key == "script.mass_redemption_day") c.mass_redemption_day = parse_int<Day>(key, v);
    else if (key == "script.mass_redemption_immediate") c.mass_redemption_immediate = parse_bool(key, v);
    else if (key.rfind("agent.", 0) == 0) {
      const auto dot = key.find('.', 6);
      if (dot == std::string::npos) throw Error(Errc::InvalidConfig, key + ": expected agent.N.field");
      const long idx = parse_int<long>(key, key.substr(6, dot - 6));
      set_agent_field(agent_entries[idx], key, key.substr(dot + 1), v);
    } else {
      throw Error(Errc::InvalidConfig, key + ": unknown key");
    }
  }

  if (!kv.count("horizon_days")) throw Error(Errc::InvalidConfig, "horizon_days: missing");
  if (!have_cpi) throw Error(Errc::InvalidConfig, "series.cpi: missing");
  if (!returns_path) throw Error(Errc::InvalidConfig, "series.returns: missing");
  const Series raw_returns = load_keyed("series.returns", resolve(*returns_path), Series::Fill::StepHold);
  c.returns = returns_kind == ReturnsKind::Index ? raw_returns : compound_returns(raw_returns, c.horizon_days);

  for (auto& [idx, entry] : agent_entries) {
    if (!entry.has_role) throw Error(Errc::InvalidConfig, "agent." + std::to_string(idx) + ".role: missing");
    // Investors and corporates buy out of savings they already hold.
    const auto role = entry.profile.role;
    if (!entry.has_initial_fiat && (role == agents::Role::ConservativeInvestor || role == agents::Role::Corporate)) {
      entry.profile.initial_fiat = entry.profile.lump_sum;
    }
    for (int i = 0; i < entry.count; ++i) c.roster.push_back(entry.profile);
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace argentum
