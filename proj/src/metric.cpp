#include "wvc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "wvc/error.hpp"
#include "wvc/period.hpp"

namespace wvc {

namespace {

void check_pair(const NormalizedSeries& zi, const NormalizedSeries& zj) {
    if (zi.length() != zj.length())
        throw ValidationError("normalized series '" + zi.source_label + "' (L=" +
                              std::to_string(zi.length()) + ") and '" + zj.source_label +
                              "' (L=" + std::to_string(zj.length()) + ") differ in length");
}

double dot_interval(const std::vector<double>& a, const std::vector<double>& b,
                    const Interval& iv) {
    double s = 0.0;
    for (std::size_t t = iv.t1; t <= iv.t2; ++t) s += a[t] * b[t];
    return s;
}

} // namespace

double wvc(const NormalizedSeries& zi, const NormalizedSeries& zj, const Interval& interval) {
    check_pair(zi, zj);
    check_interval(interval, zi.length());
    return dot_interval(zi.z, zj.z, interval);
}

double wvc_null_variance(const Interval& interval, std::size_t beta_i, std::size_t beta_j) {
    if (beta_i < 1 || beta_j < 1) throw ValidationError("window counts must be >= 1");
    return static_cast<double>(interval.count()) * static_cast<double>(beta_i) *
           static_cast<double>(beta_j);
}

double empirical_null_variance(const NormalizedSeries& zi, const NormalizedSeries& zj,
                               const Interval& interval, std::size_t permutations,
                               std::uint64_t seed) {
    check_pair(zi, zj);
    check_interval(interval, zi.length());
    if (permutations < 100)
        throw ValidationError("permutations must be >= 100, got " + std::to_string(permutations));

    const std::size_t L = zj.length();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> offsets(0, L - 1);

    std::vector<double> draws(permutations);
    double mean = 0.0;
    for (std::size_t p = 0; p < permutations; ++p) {
        const std::size_t off = offsets(rng);
        double s = 0.0;
        for (std::size_t t = interval.t1; t <= interval.t2; ++t)
            s += zi.z[t] * zj.z[(t + off) % L];
        draws[p] = s;
        mean += s;
    }
    mean /= static_cast<double>(permutations);
    double var = 0.0;
    for (double d : draws) var += (d - mean) * (d - mean);
    return var / static_cast<double>(permutations - 1);
}

double wvc_zscore(double raw, double variance) {
    if (!(variance > 0.0))
        throw ValidationError("null variance must be positive, got " + format_double(variance));
    return raw / std::sqrt(variance);
}

double correlation_probability(double z) {
    if (!std::isfinite(z)) throw ValidationError("z-score must be finite");
    const double p = std::erf(std::abs(z) / std::sqrt(2.0));
    // Keep the stated [0,1) range: erf saturates to 1.0 around |z| ~ 6.
    return std::min(p, std::nextafter(1.0, 0.0));
}

WvcResult wvc_result(const NormalizedSeries& zi, const NormalizedSeries& zj,
                     const Interval& interval, VarianceModel model) {
    WvcResult res;
    res.interval = interval;
    res.beta_i = zi.stats.beta;
    res.beta_j = zj.stats.beta;
    res.variance_model = model;
    res.raw = wvc(zi, zj, interval);
    const double variance =
        model == VarianceModel::analytic
            ? wvc_null_variance(interval, res.beta_i, res.beta_j)
            : empirical_null_variance(zi, zj, interval, trace_permutations, trace_seed);
    res.z_score = wvc_zscore(res.raw, variance);
    res.probability = correlation_probability(res.z_score);
    return res;
}

ProbabilityTrace probability_trace(const NormalizedSeries& zi, const NormalizedSeries& zj,
                                   std::size_t window_length, std::size_t stride,
                                   VarianceModel model) {
    check_pair(zi, zj);
    const std::size_t L = zi.length();
    if (window_length < 1 || window_length > L)
        throw ValidationError("trace window length " + std::to_string(window_length) +
                              " out of range [1, " + std::to_string(L) + "]");
    if (stride < 1) throw ValidationError("trace stride must be >= 1");

    ProbabilityTrace trace;
    trace.window_length = window_length;
    trace.stride = stride;
    for (std::size_t s = 0; s + window_length <= L; s += stride) {
        const Interval iv{s, s + window_length - 1};
        const WvcResult res = wvc_result(zi, zj, iv, model);
        trace.centers.push_back(s + window_length / 2);
        trace.raw.push_back(res.raw);
        trace.z_scores.push_back(res.z_score);
        trace.probabilities.push_back(res.probability);
        trace.signed_values.push_back(res.raw < 0.0 ? -res.probability : res.probability);
    }
    return trace;
}

std::pair<std::size_t, std::size_t> default_trace_grid(std::size_t tau_i, std::size_t tau_j) {
    const std::size_t wl = 2 * std::max(tau_i, tau_j);
    return {wl, std::max<std::size_t>(1, wl / 4)};
}

GraphSnapshot build_graph(const MultiSeries& ms, const Interval& interval, double alpha,
                          const std::map<std::string, std::size_t>& tau_overrides) {
    validate(ms);
    if (ms.dim() < 2)
        throw ValidationError("graph needs at least 2 signals, got " + std::to_string(ms.dim()));
    check_interval(interval, ms.length());
    for (const auto& [label, tau] : tau_overrides)
        if (ms.index_of(label) < 0)
            throw ValidationError("tau override names unknown signal '" + label + "'");

    const std::size_t d = ms.dim();
    const std::size_t L = ms.length();

    std::vector<NormalizedSeries> normalized;
    normalized.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const TimeSeries& ts = ms.at(i);
        WindowConfig cfg;
        cfg.alpha = alpha;
        if (auto it = tau_overrides.find(ts.label); it != tau_overrides.end()) {
            cfg.tau = it->second;
        } else {
            cfg.tau = detect_period(ts, default_tau_max(L), alpha).tau;
        }
        normalized.push_back(normalize(ts, periodic_stats(ts, cfg), cfg));
    }

    GraphSnapshot graph;
    graph.interval = interval;
    graph.labels.reserve(d);
    for (std::size_t i = 0; i < d; ++i) graph.labels.push_back(ms.at(i).label);
    graph.weights.assign(d, std::vector<double>(d, 0.0));
    graph.z_scores.assign(d, std::vector<double>(d, 0.0));
    graph.probabilities.assign(d, std::vector<double>(d, 0.0));

    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const WvcResult res =
                wvc_result(normalized[i], normalized[j], interval, VarianceModel::analytic);
            graph.weights[i][j] = graph.weights[j][i] = res.raw;
            graph.z_scores[i][j] = graph.z_scores[j][i] = res.z_score;
            graph.probabilities[i][j] = graph.probabilities[j][i] = res.probability;
        }
    }
    return graph;
}

std::string graph_to_json(const GraphSnapshot& graph) {
    nlohmann::json j;
    j["labels"] = graph.labels;
    j["interval"] = {{"t1", graph.interval.t1}, {"t2", graph.interval.t2}};
    j["weights"] = graph.weights;
    j["z_scores"] = graph.z_scores;
    j["probabilities"] = graph.probabilities;
    return j.dump(2) + "\n";
}

void save_trace(const ProbabilityTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "center,raw,z,probability,signed\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << trace.centers[k] << ',';
        if (std::isnan(trace.raw[k])) {
            out << ",,,"; // degenerate window: empty fields
        } else {
            out << format_double(trace.raw[k]) << ',' << format_double(trace.z_scores[k]) << ','
                << format_double(trace.probabilities[k]) << ','
                << format_double(trace.signed_values[k]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace wvc
