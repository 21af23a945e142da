#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "wvc/timeseries.hpp"

namespace wvc {

/// One modulation segment: samples [start, end] inclusive, per-signal factors.
struct ModSegment {
    std::size_t start = 0;
    std::size_t end = 0;
    double factor_i = 1.0;
    double factor_j = 1.0;
};

/// Generator parameters for the two-signal benchmark scenario.
struct ScenarioConfig {
    double length_seconds = 4800.0;
    double sample_interval = 1.0; // seconds
    double sine_period = 150.0;   // seconds
    double ig_period = 240.0;     // seconds
    double ig_mu = 1.0;
    double ig_lambda = 3.0;
    double noise_sigma = 0.02;
    std::uint64_t seed = 7;
    std::vector<ModSegment> modulation;

    std::size_t samples() const {
        return static_cast<std::size_t>(length_seconds / sample_interval + 0.5);
    }
};

/// Per-sample correlation labels: +1 same-side modulation, -1 opposite-side,
/// 0 unmodulated. binary = |labels| as reals, the RMSE target.
struct GroundTruth {
    std::vector<int> labels;
    std::vector<double> binary;

    std::size_t length() const { return labels.size(); }
};

/// A generated dataset with its ground truth.
struct Scenario {
    MultiSeries data;
    GroundTruth truth;
};

/// Throws naming the first offending field.
void validate_config(const ScenarioConfig& cfg);

/// sin(2*pi*t*sample_interval/sine_period) plus seeded N(0, noise_sigma^2)
/// noise. Label "sine". Deterministic per cfg.seed; the sine and the pulse
/// train draw from distinct per-signal streams so their noises are
/// independent.
TimeSeries gen_sine(const ScenarioConfig& cfg);

/// Repeating inverse-Gaussian pulse: one period samples the density
/// f(x; mu, lambda) = sqrt(lambda/(2 pi x^3)) * exp(-lambda (x-mu)^2 / (2 mu^2 x))
/// at x = (k+1)/P * 3*mu, rescaled to peak 1, tiled to the full length, plus
/// seeded noise. Label "ig".
TimeSeries gen_ig_train(const ScenarioConfig& cfg);

/// Multiply x_i by factor_i and x_j by factor_j inside each segment. Segments
/// must be sorted, non-overlapping and within range.
std::pair<TimeSeries, TimeSeries> apply_modulation(const TimeSeries& x_i, const TimeSeries& x_j,
                                                   const std::vector<ModSegment>& segments);

/// labels[t] = +1 where both factors sit on the same side of 1, -1 on
/// opposite sides, 0 elsewhere (including factor-1 segments).
GroundTruth ground_truth(const std::vector<ModSegment>& segments, std::size_t L);

/// The default segment schedule: 480-sample blocks at [1200m+480, 1200m+959]
/// alternating same-side (1.1, 1.1) and opposite-side (1.1, 0.9), as many as
/// fit. Covers 40% of the default-length series.
std::vector<ModSegment> default_modulation(std::size_t L);

/// The two benchmark scenarios under the default config: independent
/// (no modulation, all-zero truth) and modulated (default schedule).
std::pair<Scenario, Scenario> default_scenarios();

/// Build a scenario from an explicit config (applies cfg.modulation).
Scenario make_scenario(const ScenarioConfig& cfg);

/// JSON config mirroring ScenarioConfig field names; absent fields keep
/// defaults, unknown fields are rejected by name.
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

/// Truth CSV: header time,label; one row per sample.
void save_truth(const GroundTruth& truth, double sample_interval, double start_time,
                const std::filesystem::path& path);
GroundTruth load_truth(const std::filesystem::path& path);

} // namespace wvc
