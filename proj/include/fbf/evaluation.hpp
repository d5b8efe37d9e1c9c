// Copyright 2026 The fbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Empirical forecast evaluation on (period, forecast, realization) panels:
// rolling-window Mincer-Zarnowitz regressions and trailing mean errors.
// Rows are assumed to be horizon-aligned already; missing values are
// rejected, never imputed.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fbf/error.hpp"
#include "fbf/format.hpp"
#include "fbf/regression.hpp"

namespace fbf {

inline constexpr std::size_t kDefaultEvaluationWindow = 40;

struct ForecastRow {
  std::string period;
  double forecast = 0.0;
  double realization = 0.0;

  double error() const { return realization - forecast; }
};

struct ForecastSeries {
  std::vector<ForecastRow> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Whole-field decimal parse; accepts a leading '+'.
inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

// Numeric labels compare as numbers, anything else lexicographically.
inline bool period_less(std::string_view a, std::string_view b) {
  double x = 0.0;
  double y = 0.0;
  if (parse_double(a, x) && parse_double(b, y)) return x < y;
  return a < b;
}

}  // namespace detail

// Reads a CSV with a header naming `period`, `forecast` and `realization`
// (any order; other columns ignored). Line numbers in errors are 1-based and
// count the header.
inline ForecastSeries ingest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kSchemaError, "empty input: missing header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = detail::split_csv_line(line);
  std::ptrdiff_t col_period = -1;
  std::ptrdiff_t col_forecast = -1;
  std::ptrdiff_t col_realization = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "period") col_period = idx;
    if (header[i] == "forecast") col_forecast = idx;
    if (header[i] == "realization") col_realization = idx;
  }
  std::string missing;
  if (col_period < 0) missing += " period";
  if (col_forecast < 0) missing += " forecast";
  if (col_realization < 0) missing += " realization";
  if (!missing.empty()) fail(ErrorCode::kSchemaError, "header lacks column(s):" + missing);
  const std::size_t needed =
      static_cast<std::size_t>(std::max({col_period, col_forecast, col_realization})) + 1;

  ForecastSeries series;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() < needed) {
      fail(ErrorCode::kParseError, where + ": expected at least " + std::to_string(needed) +
                                       " fields, got " + std::to_string(fields.size()));
    }
    ForecastRow row;
    row.period = std::string(fields[static_cast<std::size_t>(col_period)]);
    if (row.period.empty()) fail(ErrorCode::kParseError, where + ": empty period label");
    const auto parse_field = [&](std::ptrdiff_t col, const char* name, double& dst) {
      const std::string_view text = fields[static_cast<std::size_t>(col)];
      if (!detail::parse_double(text, dst)) {
        fail(ErrorCode::kParseError,
             where + ": " + name + " '" + std::string(text) + "' is not a number");
      }
      if (!std::isfinite(dst)) {
        fail(ErrorCode::kValueError, where + ": " + name + " is not finite");
      }
    };
    parse_field(col_forecast, "forecast", row.forecast);
    parse_field(col_realization, "realization", row.realization);
    if (!series.rows.empty() && !detail::period_less(series.rows.back().period, row.period)) {
      fail(ErrorCode::kValueError, where + ": period '" + row.period +
                                       "' does not follow '" + series.rows.back().period + "'");
    }
    series.rows.push_back(std::move(row));
  }
  return series;
}

inline ForecastSeries ingest_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open '" + path + "'");
  return ingest_csv(in);
}

struct RollingRecord {
  std::string window_end;
  double mz_intercept = 0.0;
  double mz_slope = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  double mean_error = 0.0;
};

struct RollingResult {
  std::size_t window = 0;
  std::vector<RollingRecord> records;  // one per full window, in order
};

struct MeanErrorPoint {
  std::string window_end;
  double mean_error = 0.0;
};

namespace detail {

inline double window_mean_error(const ForecastSeries& s, std::size_t begin, std::size_t window) {
  double acc = 0.0;
  for (std::size_t i = begin; i < begin + window; ++i) acc += s.rows[i].error();
  return acc / static_cast<double>(window);
}

inline void require_window_fits(const ForecastSeries& s, std::size_t window) {
  if (s.size() < window) {
    fail(ErrorCode::kWindowTooLarge, "window " + std::to_string(window) + " exceeds series length " +
                                         std::to_string(s.size()));
  }
}

}  // namespace detail

inline OlsFit full_sample_mz(const ForecastSeries& s) {
  std::vector<double> f(s.size());
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    f[i] = s.rows[i].forecast;
    y[i] = s.rows[i].realization;
  }
  return ols_mz(f, y);
}

// MZ regression over every contiguous window of `window` rows. Only full
// windows are emitted, labelled by their last period.
inline RollingResult rolling_mz(const ForecastSeries& s, std::size_t window) {
  if (window < 3) {
    fail(ErrorCode::kInsufficientData, "rolling MZ window must be at least 3");
  }
  detail::require_window_fits(s, window);
  std::vector<double> f(s.size());
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    f[i] = s.rows[i].forecast;
    y[i] = s.rows[i].realization;
  }
  RollingResult out;
  out.window = window;
  const std::size_t count = s.size() - window + 1;
  out.records.reserve(count);
  for (std::size_t begin = 0; begin < count; ++begin) {
    const std::span<const double> fw(f.data() + begin, window);
    const std::span<const double> yw(y.data() + begin, window);
    const std::string& end_label = s.rows[begin + window - 1].period;
    OlsFit fit;
    try {
      fit = ols_mz(fw, yw);
    } catch (const Error& e) {
      throw Error(e.code(), "window ending " + end_label + ": " + e.what());
    }
    out.records.push_back({end_label, fit.line.intercept, fit.line.slope, fit.slope_se,
                           fit.r_squared, detail::window_mean_error(s, begin, window)});
  }
  return out;
}

// Trailing mean of realization - forecast over each full window.
inline std::vector<MeanErrorPoint> moving_average_bias(const ForecastSeries& s,
                                                       std::size_t window) {
  if (window < 1) fail(ErrorCode::kInvalidArgument, "window must be at least 1");
  detail::require_window_fits(s, window);
  std::vector<MeanErrorPoint> out;
  const std::size_t count = s.size() - window + 1;
  out.reserve(count);
  for (std::size_t begin = 0; begin < count; ++begin) {
    out.push_back({s.rows[begin + window - 1].period,
                   detail::window_mean_error(s, begin, window)});
  }
  return out;
}

inline constexpr std::string_view kRollingCsvHeader =
    "window_end,mz_intercept,mz_slope,slope_stderr,r_squared,mean_error";

inline void write_rolling_csv(std::ostream& out, const RollingResult& r) {
  out << kRollingCsvHeader << '\n';
  for (const RollingRecord& rec : r.records) {
    out << rec.window_end << ',' << format_sig10(rec.mz_intercept) << ','
        << format_sig10(rec.mz_slope) << ',' << format_sig10(rec.slope_stderr) << ','
        << format_sig10(rec.r_squared) << ',' << format_sig10(rec.mean_error) << '\n';
  }
}

inline void write_series_csv(std::ostream& out, const ForecastSeries& s) {
  out << "period,forecast,realization\n";
  for (const ForecastRow& row : s.rows) {
    out << row.period << ',' << format_sig10(row.forecast) << ','
        << format_sig10(row.realization) << '\n';
  }
}

}  // namespace fbf
