#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wvc/normalization.hpp"
#include "wvc/timeseries.hpp"

namespace wvc {

/// Null-variance model for z-scoring the windowed variance-correlation sum.
/// analytic: (t2-t1+1)*beta_i*beta_j. empirical: circular-shift permutations.
enum class VarianceModel { analytic, empirical };

/// One metric evaluation over an interval.
struct WvcResult {
    double raw = 0.0;         // the WVC sum
    double z_score = 0.0;
    double probability = 0.0; // 2*Phi(|z|) - 1, in [0,1)
    Interval interval;
    std::size_t beta_i = 1;
    std::size_t beta_j = 1;
    VarianceModel variance_model = VarianceModel::analytic;
};

/// Weighted graph over all signal pairs for one interval. Matrices are
/// symmetric with zero diagonal.
struct GraphSnapshot {
    std::vector<std::string> labels;
    Interval interval;
    std::vector<std::vector<double>> weights;       // raw WVC
    std::vector<std::vector<double>> z_scores;
    std::vector<std::vector<double>> probabilities;
};

/// Time-resolved correlation curve on a sliding window grid. Entries are NaN
/// for windows marked degenerate (PCC only); the CSV writer emits them as
/// empty fields. signed_value = sign(raw) * probability.
struct ProbabilityTrace {
    std::size_t window_length = 0; // samples
    std::size_t stride = 0;        // samples
    std::vector<std::size_t> centers;
    std::vector<double> raw;
    std::vector<double> z_scores;
    std::vector<double> probabilities;
    std::vector<double> signed_values;

    std::size_t size() const { return centers.size(); }
};

/// WVC over the inclusive interval: sum_{t=t1}^{t2} zi(t)*zj(t).
double wvc(const NormalizedSeries& zi, const NormalizedSeries& zj, const Interval& interval);

/// Analytic null variance (t2-t1+1)*beta_i*beta_j.
double wvc_null_variance(const Interval& interval, std::size_t beta_i, std::size_t beta_j);

/// Monte Carlo null: sample variance (n-1 form) of the WVC over `permutations`
/// circular shifts of zj by offsets drawn uniformly from [0, L-1]. Seeded and
/// deterministic. Requires permutations >= 100.
double empirical_null_variance(const NormalizedSeries& zi, const NormalizedSeries& zj,
                               const Interval& interval, std::size_t permutations,
                               std::uint64_t seed);

/// raw / sqrt(variance); variance must be positive.
double wvc_zscore(double raw, double variance);

/// Two-sided tail mass inside |z|: 2*Phi(|z|) - 1 = erf(|z|/sqrt(2)).
/// Saturates at the largest double below 1.
double correlation_probability(double z);

/// Permutation count and seed used when a trace runs under the empirical
/// variance model.
inline constexpr std::size_t trace_permutations = 200;
inline constexpr std::uint64_t trace_seed = 0x77C5;

/// Assemble raw, z and probability for one interval under the given model.
WvcResult wvc_result(const NormalizedSeries& zi, const NormalizedSeries& zj,
                     const Interval& interval, VarianceModel model = VarianceModel::analytic);

/// Slide a window of window_length by stride over both series; each window
/// yields raw, z, probability and signed values. center = start + floor(wl/2).
ProbabilityTrace probability_trace(const NormalizedSeries& zi, const NormalizedSeries& zj,
                                   std::size_t window_length, std::size_t stride,
                                   VarianceModel model = VarianceModel::analytic);

/// Default trace window: 2*max(tau_i, tau_j) samples, stride = window/4.
std::pair<std::size_t, std::size_t> default_trace_grid(std::size_t tau_i, std::size_t tau_j);

/// Full pipeline for one interval: per-signal period detection (unless the
/// label appears in tau_overrides), periodic stats, normalization, then the
/// pairwise metric under the analytic model. Requires d >= 2.
GraphSnapshot build_graph(const MultiSeries& ms, const Interval& interval, double alpha = 0.0,
                          const std::map<std::string, std::size_t>& tau_overrides = {});

/// GraphSnapshot JSON: {labels, interval:{t1,t2}, weights, z_scores,
/// probabilities} with matrices as arrays of rows.
std::string graph_to_json(const GraphSnapshot& graph);

/// Trace CSV: header center,raw,z,probability,signed; NaN entries become
/// empty fields.
void save_trace(const ProbabilityTrace& trace, const std::filesystem::path& path);

} // namespace wvc
