#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "storeplan/core/types.hpp"

namespace storeplan::io {

/// Base class for ingestion failures; each failure mode has its own subclass.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A required column is absent from the header.
struct ColumnError : IngestError {
  using IngestError::IngestError;
};
/// An hour between two consecutive rows is missing. `timestamp` names the first missing hour.
struct MissingHourError : IngestError {
  MissingHourError(const std::string& what, std::string ts) : IngestError(what), timestamp(std::move(ts)) {}
  std::string timestamp;
};
/// A cell that should hold a number does not.
struct NonNumericError : IngestError {
  using IngestError::IngestError;
};
/// A timestamp cell cannot be parsed or is not on the hour.
struct TimestampError : IngestError {
  using IngestError::IngestError;
};
/// Rows are duplicated or out of order.
struct OrderError : IngestError {
  using IngestError::IngestError;
};
/// The series does not cover whole days, or has an unexpected number of hours.
struct LengthError : IngestError {
  using IngestError::IngestError;
};

/// Hourly series cut into whole days. Feb 29 is dropped on ingestion.
struct RawSeries {
  std::string label;                        ///< value column name
  int year = 0;                             ///< calendar year of the first row
  std::vector<std::chrono::sys_days> dates; ///< one per day
  std::vector<double> values;               ///< 24 per day, hour 0 first

  [[nodiscard]] int n_days() const { return static_cast<int>(dates.size()); }
  [[nodiscard]] double at(int day, int hour) const { return values[static_cast<std::size_t>(day) * 24 + hour]; }
  [[nodiscard]] double peak() const;
  /// Index of the day with this date, or nullopt.
  [[nodiscard]] std::optional<int> day_of(std::chrono::year_month_day date) const;
};

struct ColumnSpec {
  std::string timestamp = "timestamp";
  std::string value;                ///< empty: the first column after the timestamp
  std::optional<int> expected_hours;  ///< e.g. 8760 for a full non-leap year
};

/// Strict hourly CSV reader. Timestamps are `YYYY-MM-DD HH:MM[:SS]` (a `T` separator is also
/// accepted); rows must be consecutive hours starting at midnight.
RawSeries load_timeseries(const std::filesystem::path& path, const ColumnSpec& columns = {});
RawSeries parse_timeseries(const std::string& text, const ColumnSpec& columns = {});

/// Yearly values keyed by calendar year.
using YearlySeries = std::map<int, double>;

/// Reads `year,<value>` rows. Years must be unique.
YearlySeries load_yearly_series(const std::filesystem::path& path, const std::string& value_column = {});
YearlySeries parse_yearly_series(const std::string& text, const std::string& value_column = {});

/// Values for first_year .. first_year + n - 1. Missing years after the last entry repeat the
/// last value; years before the first entry are an error.
std::vector<double> yearly_values(const YearlySeries& series, int first_year, int n, bool hold_last = true);

/// Peak load per calendar year, MW.
using PeakProjection = YearlySeries;

/// Scales each year's copy of the base series so that its maximum equals that year's projected
/// peak. Result is (n_periods, base days, 24).
Tensor3 scale_load_by_peak(const RawSeries& base, const PeakProjection& projection, int first_year,
                           int n_periods);

enum class DayStrategy { PeakStratified };
DayStrategy day_strategy_from_string(std::string_view text);
std::string_view to_string(DayStrategy s);

struct DaySelection {
  std::vector<int> days;        ///< ascending day indices into the base series
  std::vector<double> weights;  ///< days represented by each selected day
};

/// The ceil(J/2) days with the highest peak load get weight 1. The remaining days, sorted by
/// daily mean, are split into J - ceil(J/2) contiguous strata of near-equal size; each stratum is
/// represented by the member whose mean is closest to the stratum mean and weighted by its size.
DaySelection select_representative_days(const RawSeries& series, int count,
                                        DayStrategy strategy = DayStrategy::PeakStratified);

/// Scarcity event window: hours [hour_begin, hour_end) on a date.
struct ScarcityWindow {
  std::chrono::year_month_day date;
  int hour_begin = 0;
  int hour_end = 24;
};

/// Reads `date,hour_begin,hour_end` rows.
std::vector<ScarcityWindow> load_scarcity_windows(const std::filesystem::path& path);
std::vector<ScarcityWindow> parse_scarcity_windows(const std::string& text);

std::string format_date(std::chrono::sys_days d);

}  // namespace storeplan::io
