#include "argentum/outputs.hpp"

#include "argentum/errors.hpp"

#include <fstream>
#include <ostream>

namespace argentum {

namespace {

std::string cents(Value v) { return round_to<Pesos>(Exact::of(v)).to_string(); }

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write " + path.string());
  fn(out);
  out.flush();
  if (!out) throw Error(Errc::InvalidConfig, "write failed: " + path.string());
}

}  // namespace

void write_metrics(std::ostream& out, const std::vector<DailyMetrics>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& m : rows) {
    out << m.day << ',' << m.target_price.to_string() << ',' << m.backed_price.to_string() << ','
        << m.deviation.to_string() << ',' << m.public_supply.to_string() << ',' << m.offered_supply.to_string() << ','
        << m.withheld_supply.to_string() << ',' << cents(m.backing_value) << ',' << cents(m.fund) << ','
        << m.queued_redemptions.to_string() << ',' << m.disposable.to_string() << ','
        << m.payouts_today.to_string() << ',' << (m.stress ? 1 : 0) << '\n';
  }
}

void write_payouts(std::ostream& out, const std::vector<payouts::Payout>& rows) {
  out << "day,account,kind,token_amount,fiat_amount\n";
  for (const auto& p : rows) {
    out << p.day << ',' << p.account << ',' << payouts::to_string(p.kind) << ',' << p.tokens.to_string() << ','
        << p.fiat.to_string() << '\n';
  }
}

void write_summary(std::ostream& out, const Engine& engine) {
  const auto& m = engine.metrics();
  const auto& c = engine.counters();
  const auto& ts = engine.treasury().state();
  Deviation worst;
  for (const auto& row : m) worst = max_of(worst, row.deviation.is_negative() ? -row.deviation : row.deviation);
  const auto& chain = engine.ledger().state().chain;

  out << "days " << m.size() << '\n'
      << "agents " << engine.accounts().size() << '\n'
      << "final_target_price " << (m.empty() ? std::string("-") : m.back().target_price.to_string()) << '\n'
      << "max_abs_deviation " << worst.to_string() << '\n'
      << "stress_days " << c.stress_days << '\n'
      << "S_public " << ts.public_supply.to_string() << '\n'
      << "S_offered " << ts.offered_supply.to_string() << '\n'
      << "S_withheld " << ts.withheld_supply.to_string() << '\n'
      << "V " << cents(ts.backing_value) << '\n'
      << "F " << cents(ts.fund) << '\n'
      << "intents " << c.intents << '\n'
      << "dropped_intents " << c.dropped_intents << '\n'
      << "orders_filled " << c.orders_filled << '\n'
      << "orders_refunded " << c.orders_refunded << '\n'
      << "auctions " << c.auctions << '\n'
      << "lots_sold " << c.lots_sold << '\n'
      << "redemptions_paid " << c.redemptions_paid << '\n'
      << "redemptions_escalated " << c.redemptions_escalated << '\n'
      << "liquidity_exhausted " << c.liquidity_exhausted << '\n'
      << "missed_payouts " << engine.payout_engine().missed().to_string() << '\n'
      << "blocks " << chain.size() << '\n'
      << "chain_tip " << (chain.empty() ? std::string("-") : to_hex(chain.back().hash)) << '\n'
      << "state_hash " << to_hex(engine.ledger().state().state_hash()) << '\n';
}

void write_outputs(const std::filesystem::path& dir, const Engine& engine) {
  std::filesystem::create_directories(dir);
  write_file(dir / "metrics.csv", [&](std::ostream& o) { write_metrics(o, engine.metrics()); });
  write_file(dir / "ledger.log", [&](std::ostream& o) { ledger::write_ledger(o, engine.ledger().state().chain); });
  write_file(dir / "payouts.csv", [&](std::ostream& o) { write_payouts(o, engine.payouts()); });
  write_file(dir / "summary.txt", [&](std::ostream& o) { write_summary(o, engine); });
}

}  // namespace argentum
