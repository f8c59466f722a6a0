#pragma once

// Files emitted by a scenario run.

#include "argentum/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace argentum {

inline constexpr std::string_view kMetricsHeader =
    "day,target_price,backed_price,deviation,S_public,S_offered,S_withheld,V,F,queued_redemptions,disposable,"
    "payouts_today,stress";

void write_metrics(std::ostream& out, const std::vector<DailyMetrics>& rows);
void write_payouts(std::ostream& out, const std::vector<payouts::Payout>& rows);
void write_summary(std::ostream& out, const Engine& engine);

/// Writes metrics.csv, ledger.log, payouts.csv and summary.txt into `dir`,
/// creating it if needed.
void write_outputs(const std::filesystem::path& dir, const Engine& engine);

}  // namespace argentum
