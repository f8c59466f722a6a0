#include "argentum/series.hpp"

#include "argentum/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

namespace argentum {

Series::Series(Fill fill, std::vector<std::pair<Day, SeriesValue>> points) : fill_(fill), points_(std::move(points)) {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first <= points_[i - 1].first) {
      throw Error(Errc::NonAscendingDays, "series days must be strictly ascending");
    }
  }
}

std::optional<SeriesValue> Series::at(Day day) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), day,
                             [](Day d, const std::pair<Day, SeriesValue>& p) { return d < p.first; });
  if (fill_ == Fill::Sparse) {
    if (it == points_.begin() || std::prev(it)->first != day) return SeriesValue{};
    return std::prev(it)->second;
  }
  if (it == points_.begin()) return std::nullopt;
  return std::prev(it)->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Series parse_series(std::istream& in, Series::Fill fill) {
  std::string line;
  std::size_t line_no = 0;
  auto parse_error = [&](const std::string& why) {
    return Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + why, line_no);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    throw parse_error("missing header");
  }
  ++line_no;
  if (trim(line) != "day,value") throw parse_error("expected header 'day,value'");
  std::vector<std::pair<Day, SeriesValue>> points;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) throw parse_error("expected two columns");
    const std::string_view day_text = trim(row.substr(0, comma));
    const std::string_view value_text = trim(row.substr(comma + 1));
    if (day_text.empty() || !std::all_of(day_text.begin(), day_text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        day_text.size() > 9) {
      throw parse_error("bad day '" + std::string(day_text) + "'");
    }
    const Day day = std::stoll(std::string(day_text));
    SeriesValue value;
    try {
      value = SeriesValue::parse(value_text);
    } catch (const std::exception&) {
      throw parse_error("bad value '" + std::string(value_text) + "'");
    }
    if (!points.empty() && day <= points.back().first) {
      throw Error(Errc::NonAscendingDays, "line " + std::to_string(line_no) + ": day " + std::to_string(day) +
                                              " does not follow day " + std::to_string(points.back().first),
                  line_no);
    }
    points.emplace_back(day, value);
  }
  return Series(fill, std::move(points));
}

Series load_series(const std::string& path, Series::Fill fill) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open series file '" + path + "'");
  try {
    return parse_series(in, fill);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what(), e.where());
  }
}

Series compound_returns(const Series& rates, Day horizon) {
  std::vector<std::pair<Day, SeriesValue>> levels;
  SeriesValue level = SeriesValue::units(1);
  levels.emplace_back(0, level);
  for (Day d = 1; d < horizon; ++d) {
    const SeriesValue r = rates.at_or_zero(d);
    level = round_to<SeriesValue>(Exact::of(level) * (Exact::integer(1) + Exact::of(r)));
    levels.emplace_back(d, level);
  }
  return Series(Series::Fill::StepHold, std::move(levels));
}

}  // namespace argentum
