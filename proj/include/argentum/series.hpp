#pragma once

// Day-indexed numeric series read from `day,value` CSV files.

#include "argentum/fixed_point.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace argentum {

class Series {
 public:
  enum class Fill {
    StepHold,  // value persists until the next row; undefined before the first
    Sparse,    // only listed days carry a value; every other day reads as zero
  };

  Series() = default;
  Series(Fill fill, std::vector<std::pair<Day, SeriesValue>> points);

  /// Step-hold series with a single point at day 0.
  static Series constant(SeriesValue v) { return Series(Fill::StepHold, {{0, v}}); }

  std::optional<SeriesValue> at(Day day) const;
  SeriesValue at_or_zero(Day day) const { return at(day).value_or(SeriesValue{}); }

  Fill fill() const { return fill_; }
  const std::vector<std::pair<Day, SeriesValue>>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

 private:
  Fill fill_ = Fill::StepHold;
  std::vector<std::pair<Day, SeriesValue>> points_;
};

/// Parses CSV with header `day,value`, days strictly ascending.
/// Errors: ParseError(line), NonAscendingDays(line).
Series parse_series(std::istream& in, Series::Fill fill = Series::Fill::StepHold);
Series load_series(const std::string& path, Series::Fill fill = Series::Fill::StepHold);

/// Converts a series of per-day simple returns into an index level series
/// starting at 1: level(0) = 1, level(d) = level(d-1) * (1 + r(d)), each
/// step rounded to 8 decimals. Return rates step-hold like any series.
Series compound_returns(const Series& rates, Day horizon);

}  // namespace argentum
