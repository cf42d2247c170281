#include "storeplan/io/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/tokenizer.hpp>
#include <fmt/format.h>

namespace storeplan::io {

namespace chr = std::chrono;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CsvRow {
  int line = 0;
  std::vector<std::string> cells;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    CsvRow row{number, {}};
    try {
      for (const auto& cell : Tokenizer(line)) row.cells.push_back(trim(cell));
    } catch (const boost::escaped_list_error& e) {
      throw IngestError(fmt::format("line {}: {}", number, e.what()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int column_index(const CsvRow& header, const std::string& name) {
  const auto it = std::find(header.cells.begin(), header.cells.end(), name);
  if (it == header.cells.end()) throw ColumnError(fmt::format("missing column '{}'", name));
  return static_cast<int>(it - header.cells.begin());
}

const std::string& cell(const CsvRow& row, int col) {
  if (col >= static_cast<int>(row.cells.size())) {
    throw NonNumericError(fmt::format("line {}: missing cell {}", row.line, col + 1));
  }
  return row.cells[col];
}

double parse_number(const CsvRow& row, int col) {
  const std::string& s = cell(row, col);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw NonNumericError(fmt::format("line {}: '{}' is not a number", row.line, s));
  }
  return v;
}

int parse_int(std::string_view s, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw NonNumericError(fmt::format("line {}: '{}' is not an integer", line, s));
  }
  return v;
}

chr::year_month_day parse_date(std::string_view s, int line) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw TimestampError(fmt::format("line {}: bad date '{}'", line, s));
  }
  try {
    const chr::year_month_day d{chr::year{parse_int(s.substr(0, 4), line)},
                                chr::month{static_cast<unsigned>(parse_int(s.substr(5, 2), line))},
                                chr::day{static_cast<unsigned>(parse_int(s.substr(8, 2), line))}};
    if (!d.ok()) throw TimestampError(fmt::format("line {}: invalid date '{}'", line, s));
    return d;
  } catch (const NonNumericError&) {
    throw TimestampError(fmt::format("line {}: bad date '{}'", line, s));
  }
}

using Hour = chr::time_point<chr::system_clock, chr::hours>;

Hour parse_timestamp(const std::string& s, int line) {
  const auto bad = [&] { return TimestampError(fmt::format("line {}: bad timestamp '{}'", line, s)); };
  if (s.size() < 13 || (s[10] != ' ' && s[10] != 'T')) throw bad();
  const auto date = parse_date(std::string_view(s).substr(0, 10), line);
  std::string_view rest = std::string_view(s).substr(11);
  int hour = 0, minute = 0, second = 0;
  try {
    hour = parse_int(rest.substr(0, 2), line);
    if (rest.size() >= 5) {
      if (rest[2] != ':') throw bad();
      minute = parse_int(rest.substr(3, 2), line);
    }
    if (rest.size() >= 8) {
      if (rest[5] != ':') throw bad();
      second = parse_int(rest.substr(6, 2), line);
    }
    if (rest.size() != 2 && rest.size() != 5 && rest.size() != 8) throw bad();
  } catch (const NonNumericError&) {
    throw bad();
  }
  if (hour < 0 || hour > 23) throw bad();
  if (minute != 0 || second != 0) {
    throw TimestampError(fmt::format("line {}: timestamp '{}' is not on the hour", line, s));
  }
  return chr::sys_days{date} + chr::hours{hour};
}

bool is_leap_day(chr::sys_days d) {
  const chr::year_month_day ymd{d};
  return ymd.month() == chr::February && ymd.day() == chr::day{29};
}

std::string format_hour(Hour h) {
  const auto day = chr::floor<chr::days>(h);
  return fmt::format("{} {:02d}:00", format_date(day), (h - day).count());
}

/// Next hour, skipping Feb 29 entirely.
Hour next_hour(Hour h) {
  Hour n = h + chr::hours{1};
  if (is_leap_day(chr::floor<chr::days>(n))) n += chr::hours{24};
  return n;
}

}  // namespace

std::string format_date(chr::sys_days d) {
  const chr::year_month_day ymd{d};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

double RawSeries::peak() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::optional<int> RawSeries::day_of(chr::year_month_day date) const {
  const auto it = std::lower_bound(dates.begin(), dates.end(), chr::sys_days{date});
  if (it == dates.end() || *it != chr::sys_days{date}) return std::nullopt;
  return static_cast<int>(it - dates.begin());
}

RawSeries parse_timeseries(const std::string& text, const ColumnSpec& columns) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw LengthError("empty series");
  const CsvRow& header = rows.front();
  const int ts_col = column_index(header, columns.timestamp);
  int val_col = 0;
  if (columns.value.empty()) {
    val_col = ts_col == 0 ? 1 : 0;
    if (val_col >= static_cast<int>(header.cells.size())) throw ColumnError("no value column");
  } else {
    val_col = column_index(header, columns.value);
  }

  RawSeries out;
  out.label = header.cells[val_col];
  std::optional<Hour> prev;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    const Hour ts = parse_timestamp(cell(row, ts_col), row.line);
    if (is_leap_day(chr::floor<chr::days>(ts))) continue;
    if (!prev) {
      if (ts != chr::floor<chr::days>(ts)) {
        throw LengthError(fmt::format("line {}: series must start at midnight, got {}", row.line, format_hour(ts)));
      }
      out.year = static_cast<int>(chr::year_month_day{chr::floor<chr::days>(ts)}.year());
    } else {
      const Hour expected = next_hour(*prev);
      if (ts < expected) {
        throw OrderError(fmt::format("line {}: {} does not follow {}", row.line, format_hour(ts), format_hour(*prev)));
      }
      if (ts > expected) {
        throw MissingHourError(fmt::format("line {}: missing hour {}", row.line, format_hour(expected)),
                               format_hour(expected));
      }
    }
    const double v = parse_number(row, val_col);
    if (ts == chr::floor<chr::days>(ts)) out.dates.push_back(chr::floor<chr::days>(ts));
    out.values.push_back(v);
    prev = ts;
  }
  if (out.values.empty()) throw LengthError("series has no rows");
  if (out.values.size() % 24 != 0) {
    throw LengthError(fmt::format("{} hours is not a whole number of days", out.values.size()));
  }
  if (columns.expected_hours && static_cast<int>(out.values.size()) != *columns.expected_hours) {
    throw LengthError(fmt::format("expected {} hours, got {}", *columns.expected_hours, out.values.size()));
  }
  return out;
}

RawSeries load_timeseries(const std::filesystem::path& path, const ColumnSpec& columns) {
  try {
    return parse_timeseries(read_file(path), columns);
  } catch (const MissingHourError& e) {
    throw MissingHourError(fmt::format("{}: {}", path.string(), e.what()), e.timestamp);
  } catch (const ColumnError& e) {
    throw ColumnError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const NonNumericError& e) {
    throw NonNumericError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const TimestampError& e) {
    throw TimestampError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const OrderError& e) {
    throw OrderError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const LengthError& e) {
    throw LengthError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

YearlySeries parse_yearly_series(const std::string& text, const std::string& value_column) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw LengthError("empty yearly series");
  const int year_col = column_index(rows.front(), "year");
  int val_col = 0;
  if (value_column.empty()) {
    val_col = year_col == 0 ? 1 : 0;
  } else {
    val_col = column_index(rows.front(), value_column);
  }
  YearlySeries out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int year = parse_int(cell(rows[i], year_col), rows[i].line);
    if (!out.emplace(year, parse_number(rows[i], val_col)).second) {
      throw OrderError(fmt::format("line {}: duplicate year {}", rows[i].line, year));
    }
  }
  if (out.empty()) throw LengthError("yearly series has no rows");
  return out;
}

YearlySeries load_yearly_series(const std::filesystem::path& path, const std::string& value_column) {
  return parse_yearly_series(read_file(path), value_column);
}

std::vector<double> yearly_values(const YearlySeries& series, int first_year, int n, bool hold_last) {
  if (series.empty()) throw std::invalid_argument("yearly_values: empty series");
  std::vector<double> out;
  for (int y = first_year; y < first_year + n; ++y) {
    const auto it = series.find(y);
    if (it != series.end()) {
      out.push_back(it->second);
    } else if (hold_last && y > series.rbegin()->first) {
      out.push_back(series.rbegin()->second);
    } else {
      throw std::invalid_argument(fmt::format("yearly_values: no value for {}", y));
    }
  }
  return out;
}

Tensor3 scale_load_by_peak(const RawSeries& base, const PeakProjection& projection, int first_year, int n_periods) {
  const double base_peak = base.peak();
  if (!(base_peak > 0)) throw std::invalid_argument("scale_load_by_peak: base peak must be positive");
  const auto peaks = yearly_values(projection, first_year, n_periods, false);
  const int days = base.n_days();
  Tensor3 out(n_periods, days, 24);
  for (int n = 0; n < n_periods; ++n) {
    if (!(peaks[n] > 0)) throw std::invalid_argument(fmt::format("scale_load_by_peak: peak for {} must be positive", first_year + n));
    const double f = peaks[n] / base_peak;
    for (int j = 0; j < days; ++j)
      for (int k = 0; k < 24; ++k) out(n, j, k) = base.at(j, k) * f;
  }
  return out;
}

DayStrategy day_strategy_from_string(std::string_view text) {
  if (text == "peak+stratified") return DayStrategy::PeakStratified;
  throw std::invalid_argument(fmt::format("unknown day selection strategy '{}'", text));
}

std::string_view to_string(DayStrategy) { return "peak+stratified"; }

DaySelection select_representative_days(const RawSeries& series, int count, DayStrategy) {
  const int days = series.n_days();
  if (count < 2) throw std::invalid_argument("select_representative_days: need at least 2 days");
  if (count > days) throw std::invalid_argument(fmt::format("select_representative_days: {} > {} days", count, days));
  std::vector<double> peak(days), mean(days);
  for (int d = 0; d < days; ++d) {
    double p = series.at(d, 0), s = 0;
    for (int k = 0; k < 24; ++k) {
      p = std::max(p, series.at(d, k));
      s += series.at(d, k);
    }
    peak[d] = p;
    mean[d] = s / 24.0;
  }
  std::vector<int> order(days);
  std::iota(order.begin(), order.end(), 0);
  // ties broken by day index so the selection is deterministic
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return peak[a] > peak[b]; });
  const int n_peak = (count + 1) / 2;
  std::vector<std::pair<int, double>> chosen;
  for (int i = 0; i < n_peak; ++i) chosen.emplace_back(order[i], 1.0);

  std::vector<int> rest(order.begin() + n_peak, order.end());
  std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) { return mean[a] < mean[b]; });
  const int strata = count - n_peak;
  const int m = static_cast<int>(rest.size());
  for (int s = 0; s < strata; ++s) {
    const int lo = static_cast<int>(static_cast<long>(s) * m / strata);
    const int hi = static_cast<int>(static_cast<long>(s + 1) * m / strata);
    double avg = 0;
    for (int i = lo; i < hi; ++i) avg += mean[rest[i]];
    avg /= hi - lo;
    int best = rest[lo];
    for (int i = lo; i < hi; ++i)
      if (std::abs(mean[rest[i]] - avg) < std::abs(mean[best] - avg)) best = rest[i];
    chosen.emplace_back(best, static_cast<double>(hi - lo));
  }
  std::sort(chosen.begin(), chosen.end());
  DaySelection out;
  for (const auto& [d, w] : chosen) {
    out.days.push_back(d);
    out.weights.push_back(w);
  }
  return out;
}

std::vector<ScarcityWindow> parse_scarcity_windows(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) return {};
  const int date_col = column_index(rows.front(), "date");
  const int begin_col = column_index(rows.front(), "hour_begin");
  const int end_col = column_index(rows.front(), "hour_end");
  std::vector<ScarcityWindow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    ScarcityWindow w{parse_date(cell(row, date_col), row.line), parse_int(cell(row, begin_col), row.line),
                     parse_int(cell(row, end_col), row.line)};
    if (w.hour_begin < 0 || w.hour_end > 24 || w.hour_begin >= w.hour_end) {
      throw TimestampError(fmt::format("line {}: bad hour range [{}, {})", row.line, w.hour_begin, w.hour_end));
    }
    out.push_back(w);
  }
  return out;
}

std::vector<ScarcityWindow> load_scarcity_windows(const std::filesystem::path& path) {
  return parse_scarcity_windows(read_file(path));
}

}  // namespace storeplan::io
