// argentum: run scenarios, standalone auctions, ledger verification and
// metrics reports.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure.

#include "argentum/auction.hpp"
#include "argentum/config.hpp"
#include "argentum/errors.hpp"
#include "argentum/ledger.hpp"
#include "argentum/outputs.hpp"
#include "argentum/report.hpp"
#include "argentum/simulator.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace argentum;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kVerifyFailed = 2;

int simulate(const std::string& config_path, const std::string& out_dir) {
  try {
    const auto config = load_config(config_path);
    Engine engine(config);
    engine.run();
    write_outputs(out_dir, engine);
    std::cout << "simulated " << engine.metrics().size() << " days; outputs in " << out_dir << '\n';
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::logic_error& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerifyFailed;
  }
}

int run_auction_cmd(const std::string& bids_path, std::int64_t lots, const std::string& lot_size,
                    const std::string& base_price, const std::string& gamma) {
  try {
    std::ifstream in(bids_path);
    if (!in) throw Error(Errc::InvalidBids, "cannot open " + bids_path);
    auction::AuctionConfig cfg;
    cfg.lots = lots;
    cfg.lot_size = Tokens::parse(lot_size);
    cfg.base_price = Pesos::parse(base_price);
    cfg.gamma = Rate::parse(gamma);
    const auto result = auction::run_auction(auction::read_bids(in), cfg);
    auction::write_result(std::cout, result);
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (e.where()) std::cerr << " (line " << *e.where() << ')';
    std::cerr << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

int replay_cmd(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << '\n';
    return kInvalid;
  }
  try {
    const auto chain = ledger::read_ledger(in);
    if (chain.empty()) {
      std::cout << "FAIL empty ledger\n";
      return kVerifyFailed;
    }
    const auto state = ledger::replay(ledger::LedgerState{}, chain);
    std::cout << "OK blocks=" << chain.size() << " state_hash=" << to_hex(state.state_hash()) << '\n';
    return kOk;
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::BrokenChain:
        std::cout << "FAIL broken chain at height " << e.where().value_or(0) << ": " << e.what() << '\n';
        break;
      case Errc::MalformedLedger:
        std::cout << "FAIL malformed ledger at line " << e.where().value_or(0) << ": " << e.what() << '\n';
        break;
      default:
        std::cout << "FAIL " << e.what() << '\n';
    }
    return kVerifyFailed;
  }
}

int report_cmd(const std::string& metrics_path, const std::string& plot_dir) {
  try {
    std::ifstream in(metrics_path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + metrics_path);
    const auto rows = report::read_metrics(in);
    report::print_summary(std::cout, report::summarize(rows));
    if (!plot_dir.empty()) report::write_plots(plot_dir, rows);
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CPI-pegged token economy simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and write its outputs");
  sim->add_option("--config", config_path, "Scenario config file")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();

  std::string bids_path, lot_size = "1", base_price, gamma = "0.05";
  std::int64_t lots = 0;
  auto* auc = app.add_subcommand("auction", "Allocate lots for a bids file");
  auc->add_option("--bids", bids_path, "CSV: account,deposit,price_cap,timestamp")->required();
  auc->add_option("--lots", lots, "Lots offered (Q)")->required()->check(CLI::NonNegativeNumber);
  auc->add_option("--lot-size", lot_size, "Tokens per lot (L)");
  auc->add_option("--base-price", base_price, "Base lot price in AR$ (B)")->required();
  auc->add_option("--gamma", gamma, "Concentration slope");

  std::string ledger_path;
  auto* rep = app.add_subcommand("replay", "Verify a ledger export and replay it");
  rep->add_option("--ledger", ledger_path, "ledger.log")->required();

  std::string metrics_path, plot_dir;
  auto* rpt = app.add_subcommand("report", "Summarize a metrics.csv");
  rpt->add_option("--metrics", metrics_path, "metrics.csv")->required();
  rpt->add_option("--plot", plot_dir, "Directory for SVG charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  if (*sim) return simulate(config_path, out_dir);
  if (*auc) return run_auction_cmd(bids_path, lots, lot_size, base_price, gamma);
  if (*rep) return replay_cmd(ledger_path);
  return report_cmd(metrics_path, plot_dir);
}
