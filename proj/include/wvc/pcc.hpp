#pragma once

#include <cstddef>
#include <utility>

#include "wvc/metric.hpp"
#include "wvc/timeseries.hpp"

namespace wvc {

/// One Pearson-correlation evaluation with its Fisher transform.
struct PccResult {
    double r = 0.0;           // in [-1, 1]
    double fisher = 0.0;      // atanh(clamped r)
    double z_score = 0.0;     // fisher * sqrt(n-3)
    std::size_t n = 0;        // window sample count
    double probability = 0.0; // 2*Phi(|z|) - 1
};

/// |r| is clamped to this before atanh so duplicated signals map to a large
/// finite z rather than infinity.
inline constexpr double pcc_r_max = 1.0 - 1e-12;

/// Sample Pearson correlation over the inclusive interval. Throws a
/// degenerate-window error when either window is constant.
double pearson(const TimeSeries& xi, const TimeSeries& xj, const Interval& interval);

/// Fisher transform: fisher = atanh(r), z = fisher * sqrt(n-3). |r| is
/// clamped to pcc_r_max; n must be >= 4.
std::pair<double, double> fisher_z(double r, std::size_t n);

/// Sliding-window PCC probability trace on the same grid rule as
/// probability_trace (identical centers for identical window/stride).
/// Windows with a constant signal are recorded as NaN markers, not skipped.
ProbabilityTrace pcc_probability_trace(const TimeSeries& xi, const TimeSeries& xj,
                                       std::size_t window_length, std::size_t stride);

} // namespace wvc
