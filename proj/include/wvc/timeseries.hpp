#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wvc {

/// One uniformly sampled signal. Values are finite, sample_interval > 0.
struct TimeSeries {
    std::string label;
    std::vector<double> values;
    double sample_interval = 1.0; // seconds
    double start_time = 0.0;      // seconds

    std::size_t length() const { return values.size(); }
};

/// Column-aligned collection of series sharing one time axis.
/// All members have identical length, sample_interval and start_time;
/// labels are unique.
struct MultiSeries {
    std::vector<TimeSeries> series;

    std::size_t dim() const { return series.size(); }
    std::size_t length() const { return series.empty() ? 0 : series.front().values.size(); }
    double sample_interval() const { return series.empty() ? 1.0 : series.front().sample_interval; }
    double start_time() const { return series.empty() ? 0.0 : series.front().start_time; }

    const TimeSeries& at(std::size_t i) const;
    /// Index of the series with the given label, or -1.
    int index_of(std::string_view label) const;
};

/// Inclusive sample-index interval: 0 <= t1 <= t2 <= L-1.
struct Interval {
    std::size_t t1 = 0;
    std::size_t t2 = 0;

    std::size_t count() const { return t2 - t1 + 1; }
};

enum class FileFormat { csv, json };

void validate(const TimeSeries& ts);
void validate(const MultiSeries& ms);
void check_interval(const Interval& iv, std::size_t length);

/// Shortest round-trip decimal encoding (never more than 17 significant digits).
std::string format_double(double v);
/// Strict full-token parse; `where` names the location in error messages.
double parse_double(std::string_view text, const std::string& where);

MultiSeries load_multiseries(const std::filesystem::path& path, FileFormat format);
void save_multiseries(const MultiSeries& ms, const std::filesystem::path& path, FileFormat format);

/// Guess csv/json from the file extension; defaults to csv.
FileFormat format_from_path(const std::filesystem::path& path);

} // namespace wvc
