#include "argentum/report.hpp"

#include "argentum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace argentum::report {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& cell, std::uint64_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + cell + "'", line);
  }
}

}  // namespace

std::vector<MetricsRow> read_metrics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "empty metrics file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const char* needed[] = {"day",       "target_price", "backed_price", "deviation",  "S_public", "S_offered",
                          "S_withheld", "V",           "F",            "disposable", "stress"};
  for (const char* name : needed) {
    if (!col.count(name)) throw Error(Errc::ParseError, std::string("missing column '") + name + "'", 1);
  }

  std::vector<MetricsRow> rows;
  std::uint64_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(n) + ": expected " + std::to_string(header.size()) +
                                        " cells", n);
    }
    const auto at = [&](const char* name) -> const std::string& { return cells[col.at(name)]; };
    MetricsRow r;
    r.day = static_cast<Day>(number(at("day"), n));
    r.target_price = number(at("target_price"), n);
    r.backed_price = number(at("backed_price"), n);
    try {
      r.deviation = Deviation::parse(at("deviation"));
    } catch (const Error&) {
      throw Error(Errc::ParseError, "line " + std::to_string(n) + ": bad deviation", n);
    }
    r.public_supply = number(at("S_public"), n);
    r.offered_supply = number(at("S_offered"), n);
    r.withheld_supply = number(at("S_withheld"), n);
    r.backing_value = number(at("V"), n);
    r.fund = number(at("F"), n);
    r.disposable = number(at("disposable"), n);
    const std::string& st = at("stress");
    if (st != "0" && st != "1") throw Error(Errc::ParseError, "line " + std::to_string(n) + ": stress must be 0 or 1", n);
    r.stress = st == "1";
    r.s_public = at("S_public");
    r.s_offered = at("S_offered");
    r.s_withheld = at("S_withheld");
    rows.push_back(std::move(r));
  }
  return rows;
}

Summary summarize(const std::vector<MetricsRow>& rows) {
  Summary s;
  s.days = rows.size();
  for (const auto& r : rows) {
    const Deviation mag = r.deviation.is_negative() ? -r.deviation : r.deviation;
    s.max_abs_deviation = max_of(s.max_abs_deviation, mag);
    s.stress_days += r.stress;
  }
  if (!rows.empty()) {
    s.final_public = rows.back().s_public;
    s.final_offered = rows.back().s_offered;
    s.final_withheld = rows.back().s_withheld;
    s.min_disposable = rows.front().disposable;
    for (const auto& r : rows) s.min_disposable = std::min(s.min_disposable, r.disposable);
  }
  return s;
}

void print_summary(std::ostream& out, const Summary& s) {
  out << "days " << s.days << '\n'
      << "max_abs_deviation " << s.max_abs_deviation.to_string() << '\n'
      << "stress_days " << s.stress_days << '\n'
      << "final_S_public " << (s.days ? s.final_public : "-") << '\n'
      << "final_S_offered " << (s.days ? s.final_offered : "-") << '\n'
      << "final_S_withheld " << (s.days ? s.final_withheld : "-") << '\n';
}

namespace {

struct Line {
  std::string label;
  std::string color;
  std::vector<double> ys;
};

void svg_chart(const std::filesystem::path& path, const std::string& title, const std::vector<Day>& xs,
               const std::vector<Line>& lines) {
  constexpr double W = 800, H = 400, L = 70, R = 20, T = 40, B = 40;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& l : lines) {
    for (double y : l.ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double x0 = xs.empty() ? 0 : static_cast<double>(xs.front());
  const double x1 = xs.empty() || xs.back() == xs.front() ? x0 + 1 : static_cast<double>(xs.back());
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return T + (hi - y) / (hi - lo) * (H - T - B); };

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write " + path.string());
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << hi << "</text>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"11\">" << lo << "</text>\n"
      << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">day " << x0 << "</text>\n"
      << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\" font-size=\"11\">day " << x1
      << "</text>\n";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& l = lines[k];
    out << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size() && i < l.ys.size(); ++i) {
      out << px(static_cast<double>(xs[i])) << ',' << py(l.ys[i]) << ' ';
    }
    out << "\"/>\n"
        << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 + 14 * k << "\" font-size=\"12\" fill=\"" << l.color
        << "\">" << l.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_plots(const std::filesystem::path& dir, const std::vector<MetricsRow>& rows) {
  std::filesystem::create_directories(dir);
  std::vector<Day> xs;
  Line target{"target price", "#1f77b4", {}}, backed{"backed price", "#d62728", {}};
  Line pub{"S_public", "#1f77b4", {}}, off{"S_offered", "#2ca02c", {}}, wh{"S_withheld", "#ff7f0e", {}};
  Line disp{"disposable AR$", "#9467bd", {}};
  for (const auto& r : rows) {
    xs.push_back(r.day);
    target.ys.push_back(r.target_price);
    backed.ys.push_back(r.backed_price);
    pub.ys.push_back(r.public_supply);
    off.ys.push_back(r.offered_supply);
    wh.ys.push_back(r.withheld_supply);
    disp.ys.push_back(r.disposable);
  }
  svg_chart(dir / "price.svg", "Target vs backed price", xs, {target, backed});
  svg_chart(dir / "supply.svg", "Token supply", xs, {pub, off, wh});
  svg_chart(dir / "disposable.svg", "Disposable amount", xs, {disp});
}

}  // namespace argentum::report
