#include "wvc/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wvc/error.hpp"

namespace wvc {

namespace {

// Relative tolerance for the uniform-spacing check on CSV time columns.
constexpr double kTimeAxisTolerance = 1e-6;

std::string trim_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

const TimeSeries& MultiSeries::at(std::size_t i) const {
    if (i >= series.size())
        throw ValidationError("series index " + std::to_string(i) + " out of range (d=" +
                              std::to_string(series.size()) + ")");
    return series[i];
}

int MultiSeries::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series[i].label == label) return static_cast<int>(i);
    return -1;
}

void validate(const TimeSeries& ts) {
    if (ts.values.empty())
        throw ValidationError("series '" + ts.label + "': empty value sequence");
    if (!(ts.sample_interval > 0.0) || !std::isfinite(ts.sample_interval))
        throw ValidationError("series '" + ts.label + "': sample_interval must be a positive finite number");
    if (!std::isfinite(ts.start_time))
        throw ValidationError("series '" + ts.label + "': start_time must be finite");
    for (std::size_t t = 0; t < ts.values.size(); ++t)
        if (!std::isfinite(ts.values[t]))
            throw ValidationError("series '" + ts.label + "': non-finite value at sample " + std::to_string(t));
}

void validate(const MultiSeries& ms) {
    if (ms.series.empty()) throw ValidationError("multiseries has no signal columns");
    std::set<std::string> labels;
    const TimeSeries& first = ms.series.front();
    for (const TimeSeries& ts : ms.series) {
        validate(ts);
        if (!labels.insert(ts.label).second)
            throw ValidationError("duplicate series label '" + ts.label + "'");
        if (ts.values.size() != first.values.size())
            throw ValidationError("series '" + ts.label + "': length " + std::to_string(ts.values.size()) +
                                  " differs from '" + first.label + "' (" +
                                  std::to_string(first.values.size()) + ")");
        if (ts.sample_interval != first.sample_interval)
            throw ValidationError("series '" + ts.label + "': sample_interval differs from '" + first.label + "'");
        if (ts.start_time != first.start_time)
            throw ValidationError("series '" + ts.label + "': start_time differs from '" + first.label + "'");
    }
}

void check_interval(const Interval& iv, std::size_t length) {
    if (iv.t1 > iv.t2)
        throw ValidationError("interval t1=" + std::to_string(iv.t1) + " exceeds t2=" + std::to_string(iv.t2));
    if (length == 0 || iv.t2 > length - 1)
        throw ValidationError("interval t2=" + std::to_string(iv.t2) + " out of range (L=" +
                              std::to_string(length) + ")");
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& where) {
    // from_chars rejects leading whitespace and '+'; tolerate both.
    std::size_t begin = text.find_first_not_of(" \t");
    if (begin == std::string_view::npos)
        throw ValidationError(where + ": empty numeric cell");
    std::size_t end = text.find_last_not_of(" \t");
    std::string_view token = text.substr(begin, end - begin + 1);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ValidationError(where + ": cannot parse '" + std::string(text) + "' as a number");
    return value;
}

FileFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? FileFormat::json : FileFormat::csv;
}

namespace {

MultiSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("'" + path.string() + "': empty file");
    std::vector<std::string> header = split_csv_row(trim_cr(line));
    if (header.empty() || header.front() != "time")
        throw ValidationError("'" + path.string() + "': first header column must be 'time'");
    if (header.size() < 2)
        throw ValidationError("'" + path.string() + "': no signal columns after 'time'");

    const std::size_t ncols = header.size();
    std::vector<double> times;
    std::vector<std::vector<double>> columns(ncols - 1);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = trim_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_row(line);
        if (cells.size() != ncols)
            throw ValidationError("'" + path.string() + "' row " + std::to_string(row) + ": expected " +
                                  std::to_string(ncols) + " cells, got " + std::to_string(cells.size()));
        const std::string where = "'" + path.string() + "' row " + std::to_string(row);
        times.push_back(parse_double(cells[0], where + " column 'time'"));
        for (std::size_t c = 1; c < ncols; ++c)
            columns[c - 1].push_back(parse_double(cells[c], where + " column '" + header[c] + "'"));
    }
    if (times.empty()) throw ValidationError("'" + path.string() + "': no data rows");

    double interval = 1.0; // single-row files carry no spacing information
    if (times.size() > 1) {
        interval = times[1] - times[0];
        if (!(interval > 0.0))
            throw ValidationError("'" + path.string() + "' row 3: non-increasing time axis");
        for (std::size_t t = 1; t + 1 < times.size(); ++t) {
            double d = times[t + 1] - times[t];
            double tol = kTimeAxisTolerance * std::max(std::abs(d), std::abs(interval));
            if (std::abs(d - interval) > tol)
                throw ValidationError("'" + path.string() + "' row " + std::to_string(t + 3) +
                                      ": non-uniform time axis (step " + format_double(d) +
                                      " vs " + format_double(interval) + ")");
        }
    }

    MultiSeries ms;
    for (std::size_t c = 1; c < ncols; ++c) {
        TimeSeries ts;
        ts.label = header[c];
        ts.values = std::move(columns[c - 1]);
        ts.sample_interval = interval;
        ts.start_time = times.front();
        ms.series.push_back(std::move(ts));
    }
    validate(ms);
    return ms;
}

MultiSeries load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path.string() + "': " + e.what());
    }
    for (const char* key : {"sample_interval", "start_time", "labels", "values"})
        if (!j.contains(key))
            throw ValidationError("'" + path.string() + "': missing field '" + std::string(key) + "'");

    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.empty()) throw ValidationError("'" + path.string() + "': 'labels' is empty");
    const auto& rows = j.at("values");
    if (!rows.is_array() || rows.empty())
        throw ValidationError("'" + path.string() + "': 'values' must be a non-empty array of rows");

    MultiSeries ms;
    for (const std::string& label : labels) {
        TimeSeries ts;
        ts.label = label;
        ts.sample_interval = j.at("sample_interval").get<double>();
        ts.start_time = j.at("start_time").get<double>();
        ts.values.reserve(rows.size());
        ms.series.push_back(std::move(ts));
    }
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != labels.size())
            throw ValidationError("'" + path.string() + "' values row " + std::to_string(r) +
                                  ": expected " + std::to_string(labels.size()) + " entries");
        for (std::size_t c = 0; c < labels.size(); ++c)
            ms.series[c].values.push_back(row[c].get<double>());
        ++r;
    }
    validate(ms);
    return ms;
}

} // namespace

MultiSeries load_multiseries(const std::filesystem::path& path, FileFormat format) {
    if (!std::filesystem::exists(path))
        throw IoError("input file '" + path.string() + "' does not exist");
    return format == FileFormat::csv ? load_csv(path) : load_json(path);
}

void save_multiseries(const MultiSeries& ms, const std::filesystem::path& path, FileFormat format) {
    validate(ms);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    if (format == FileFormat::csv) {
        out << "time";
        for (const TimeSeries& ts : ms.series) out << ',' << ts.label;
        out << '\n';
        const std::size_t L = ms.length();
        for (std::size_t t = 0; t < L; ++t) {
            out << format_double(ms.start_time() + static_cast<double>(t) * ms.sample_interval());
            for (const TimeSeries& ts : ms.series) out << ',' << format_double(ts.values[t]);
            out << '\n';
        }
    } else {
        nlohmann::json j;
        j["sample_interval"] = ms.sample_interval();
        j["start_time"] = ms.start_time();
        nlohmann::json labels = nlohmann::json::array();
        for (const TimeSeries& ts : ms.series) labels.push_back(ts.label);
        j["labels"] = std::move(labels);
        nlohmann::json rows = nlohmann::json::array();
        const std::size_t L = ms.length();
        for (std::size_t t = 0; t < L; ++t) {
            nlohmann::json row = nlohmann::json::array();
            for (const TimeSeries& ts : ms.series) row.push_back(ts.values[t]);
            rows.push_back(std::move(row));
        }
        j["values"] = std::move(rows);
        out << j.dump(2) << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace wvc
