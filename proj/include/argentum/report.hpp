#pragma once

// Reads a metrics.csv back and summarizes or plots it.

#include "argentum/fixed_point.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace argentum::report {

struct MetricsRow {
  Day day = 0;
  double target_price = 0;
  double backed_price = 0;
  Deviation deviation;
  double public_supply = 0;
  double offered_supply = 0;
  double withheld_supply = 0;
  double backing_value = 0;
  double fund = 0;
  double disposable = 0;
  bool stress = false;
  std::string s_public, s_offered, s_withheld;  // as written, for exact reporting
};

/// Columns are located by name; extra columns are ignored.
/// Errc::ParseError(line) on a missing column or a bad cell.
std::vector<MetricsRow> read_metrics(std::istream& in);

struct Summary {
  std::size_t days = 0;
  Deviation max_abs_deviation;
  std::size_t stress_days = 0;
  std::string final_public, final_offered, final_withheld;
  double min_disposable = 0;
};

Summary summarize(const std::vector<MetricsRow>& rows);
void print_summary(std::ostream& out, const Summary& s);

/// price.svg, supply.svg and disposable.svg.
void write_plots(const std::filesystem::path& dir, const std::vector<MetricsRow>& rows);

}  // namespace argentum::report
