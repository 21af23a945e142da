#include "wvc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wvc/error.hpp"

namespace wvc {

namespace {

// Distinct per-signal noise streams: XORed into the scenario seed so the two
// generators stay mutually independent yet deterministic per seed.
constexpr std::uint64_t sine_stream_tag = 0x53494E45; // "SINE"
constexpr std::uint64_t ig_stream_tag = 0x49475452;   // "IGTR"

void add_noise(std::vector<double>& values, double sigma, std::uint64_t stream_seed) {
    if (sigma <= 0.0) return;
    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : values) v += noise(rng);
}

void check_segments(const std::vector<ModSegment>& segments, std::size_t L,
                    const std::string& where) {
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const ModSegment& seg = segments[k];
        const std::string name = where + "[" + std::to_string(k) + "]";
        if (seg.start > seg.end)
            throw ValidationError(name + ": start " + std::to_string(seg.start) +
                                  " exceeds end " + std::to_string(seg.end));
        if (seg.end > L - 1 || L == 0)
            throw ValidationError(name + ": end " + std::to_string(seg.end) +
                                  " out of range (L=" + std::to_string(L) + ")");
        if (!(seg.factor_i > 0.0) || !(seg.factor_j > 0.0))
            throw ValidationError(name + ": factors must be positive");
        if (k > 0 && segments[k - 1].end >= seg.start)
            throw ValidationError(name + ": overlaps or is not sorted after " + where + "[" +
                                  std::to_string(k - 1) + "]");
    }
}

double ig_density(double x, double mu, double lambda) {
    return std::sqrt(lambda / (2.0 * std::numbers::pi * x * x * x)) *
           std::exp(-lambda * (x - mu) * (x - mu) / (2.0 * mu * mu * x));
}

} // namespace

void validate_config(const ScenarioConfig& cfg) {
    if (!(cfg.sample_interval > 0.0) || !std::isfinite(cfg.sample_interval))
        throw ValidationError("sample_interval must be a positive finite number");
    if (!(cfg.length_seconds > 0.0) || !std::isfinite(cfg.length_seconds))
        throw ValidationError("length_seconds must be a positive finite number");
    if (!(cfg.sine_period >= 2.0 * cfg.sample_interval) || !std::isfinite(cfg.sine_period))
        throw ValidationError("sine_period must be at least 2*sample_interval, got " +
                              format_double(cfg.sine_period));
    if (!(cfg.ig_period >= 2.0 * cfg.sample_interval) || !std::isfinite(cfg.ig_period))
        throw ValidationError("ig_period must be at least 2*sample_interval, got " +
                              format_double(cfg.ig_period));
    if (cfg.length_seconds < 4.0 * std::max(cfg.sine_period, cfg.ig_period))
        throw ValidationError("length_seconds must cover at least 4 periods of the slower "
                              "signal, got " + format_double(cfg.length_seconds));
    if (!(cfg.ig_mu > 0.0)) throw ValidationError("ig_mu must be positive");
    if (!(cfg.ig_lambda > 0.0)) throw ValidationError("ig_lambda must be positive");
    if (cfg.noise_sigma < 0.0 || !std::isfinite(cfg.noise_sigma))
        throw ValidationError("noise_sigma must be >= 0");
    check_segments(cfg.modulation, cfg.samples(), "modulation");
}

TimeSeries gen_sine(const ScenarioConfig& cfg) {
    validate_config(cfg);
    const std::size_t L = cfg.samples();
    TimeSeries ts;
    ts.label = "sine";
    ts.sample_interval = cfg.sample_interval;
    ts.values.resize(L);
    const double omega = 2.0 * std::numbers::pi * cfg.sample_interval / cfg.sine_period;
    for (std::size_t t = 0; t < L; ++t) ts.values[t] = std::sin(omega * static_cast<double>(t));
    add_noise(ts.values, cfg.noise_sigma, cfg.seed ^ sine_stream_tag);
    return ts;
}

TimeSeries gen_ig_train(const ScenarioConfig& cfg) {
    validate_config(cfg);
    const std::size_t L = cfg.samples();
    const auto P = static_cast<std::size_t>(cfg.ig_period / cfg.sample_interval + 0.5);

    // One period of the density on (0, 3*mu], rescaled so the pulse peak is 1.
    std::vector<double> pulse(P);
    const double x_max = 3.0 * cfg.ig_mu;
    double peak = 0.0;
    for (std::size_t k = 0; k < P; ++k) {
        const double x = static_cast<double>(k + 1) / static_cast<double>(P) * x_max;
        pulse[k] = ig_density(x, cfg.ig_mu, cfg.ig_lambda);
        peak = std::max(peak, pulse[k]);
    }
    for (double& v : pulse) v /= peak;

    TimeSeries ts;
    ts.label = "ig";
    ts.sample_interval = cfg.sample_interval;
    ts.values.resize(L);
    for (std::size_t t = 0; t < L; ++t) ts.values[t] = pulse[t % P];
    add_noise(ts.values, cfg.noise_sigma, cfg.seed ^ ig_stream_tag);
    return ts;
}

std::pair<TimeSeries, TimeSeries> apply_modulation(const TimeSeries& x_i, const TimeSeries& x_j,
                                                   const std::vector<ModSegment>& segments) {
    if (x_i.length() != x_j.length())
        throw ValidationError("series '" + x_i.label + "' and '" + x_j.label +
                              "' differ in length");
    check_segments(segments, x_i.length(), "segment");
    TimeSeries out_i = x_i;
    TimeSeries out_j = x_j;
    for (const ModSegment& seg : segments) {
        for (std::size_t t = seg.start; t <= seg.end; ++t) {
            out_i.values[t] *= seg.factor_i;
            out_j.values[t] *= seg.factor_j;
        }
    }
    return {std::move(out_i), std::move(out_j)};
}

GroundTruth ground_truth(const std::vector<ModSegment>& segments, std::size_t L) {
    check_segments(segments, L, "segment");
    GroundTruth truth;
    truth.labels.assign(L, 0);
    for (const ModSegment& seg : segments) {
        int label = 0;
        const bool i_up = seg.factor_i > 1.0, i_down = seg.factor_i < 1.0;
        const bool j_up = seg.factor_j > 1.0, j_down = seg.factor_j < 1.0;
        if ((i_up && j_up) || (i_down && j_down)) label = 1;
        else if ((i_up && j_down) || (i_down && j_up)) label = -1;
        for (std::size_t t = seg.start; t <= seg.end; ++t) truth.labels[t] = label;
    }
    truth.binary.resize(L);
    for (std::size_t t = 0; t < L; ++t) truth.binary[t] = std::abs(truth.labels[t]);
    return truth;
}

std::vector<ModSegment> default_modulation(std::size_t L) {
    std::vector<ModSegment> segments;
    for (std::size_t m = 0;; ++m) {
        const std::size_t start = 1200 * m + 480;
        const std::size_t end = start + 479;
        if (L == 0 || end > L - 1) break;
        ModSegment seg;
        seg.start = start;
        seg.end = end;
        seg.factor_i = 1.1;
        seg.factor_j = (m % 2 == 0) ? 1.1 : 0.9;
        segments.push_back(seg);
    }
    return segments;
}

Scenario make_scenario(const ScenarioConfig& cfg) {
    validate_config(cfg);
    auto [sine, ig] = apply_modulation(gen_sine(cfg), gen_ig_train(cfg), cfg.modulation);
    Scenario scenario;
    scenario.data.series.push_back(std::move(sine));
    scenario.data.series.push_back(std::move(ig));
    scenario.truth = ground_truth(cfg.modulation, cfg.samples());
    validate(scenario.data);
    return scenario;
}

std::pair<Scenario, Scenario> default_scenarios() {
    ScenarioConfig cfg;
    Scenario independent = make_scenario(cfg);
    cfg.modulation = default_modulation(cfg.samples());
    Scenario modulated = make_scenario(cfg);
    return {std::move(independent), std::move(modulated)};
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError("config file '" + path.string() + "' does not exist");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path.string() + "': " + e.what());
    }

    static const std::set<std::string> known = {
        "length_seconds", "sample_interval", "sine_period", "ig_period", "ig_mu",
        "ig_lambda",      "noise_sigma",     "seed",        "modulation"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw ValidationError("'" + path.string() + "': unknown config field '" +
                                  item.key() + "'");

    ScenarioConfig cfg;
    try {
        if (j.contains("length_seconds")) cfg.length_seconds = j["length_seconds"].get<double>();
        if (j.contains("sample_interval")) cfg.sample_interval = j["sample_interval"].get<double>();
        if (j.contains("sine_period")) cfg.sine_period = j["sine_period"].get<double>();
        if (j.contains("ig_period")) cfg.ig_period = j["ig_period"].get<double>();
        if (j.contains("ig_mu")) cfg.ig_mu = j["ig_mu"].get<double>();
        if (j.contains("ig_lambda")) cfg.ig_lambda = j["ig_lambda"].get<double>();
        if (j.contains("noise_sigma")) cfg.noise_sigma = j["noise_sigma"].get<double>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("modulation")) {
            for (const auto& s : j["modulation"]) {
                ModSegment seg;
                seg.start = s.at("start").get<std::size_t>();
                seg.end = s.at("end").get<std::size_t>();
                seg.factor_i = s.at("factor_i").get<double>();
                seg.factor_j = s.at("factor_j").get<double>();
                cfg.modulation.push_back(seg);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path.string() + "': " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

void save_truth(const GroundTruth& truth, double sample_interval, double start_time,
                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "time,label\n";
    for (std::size_t t = 0; t < truth.length(); ++t)
        out << format_double(start_time + static_cast<double>(t) * sample_interval) << ','
            << truth.labels[t] << '\n';
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

GroundTruth load_truth(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError("truth file '" + path.string() + "' does not exist");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("'" + path.string() + "': empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time,label")
        throw ValidationError("'" + path.string() + "': header must be 'time,label'");

    GroundTruth truth;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError("'" + path.string() + "' row " + std::to_string(row) +
                                  ": expected 2 cells");
        const std::string where = "'" + path.string() + "' row " + std::to_string(row);
        const double label = parse_double(line.substr(comma + 1), where + " column 'label'");
        if (label != -1.0 && label != 0.0 && label != 1.0)
            throw ValidationError(where + ": label must be -1, 0 or 1, got " +
                                  format_double(label));
        truth.labels.push_back(static_cast<int>(label));
    }
    if (truth.labels.empty()) throw ValidationError("'" + path.string() + "': no data rows");
    truth.binary.resize(truth.labels.size());
    for (std::size_t t = 0; t < truth.labels.size(); ++t)
        truth.binary[t] = std::abs(truth.labels[t]);
    return truth;
}

} // namespace wvc
