#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wvc/timeseries.hpp"

namespace wvc {

/// Window layout: length tau (samples) and fractional overlap alpha in [0,1).
struct WindowConfig {
    double alpha = 0.0;
    std::size_t tau = 1;
};

/// Per-position statistics aggregated across the window set.
struct WindowStats {
    std::vector<double> mu;          // length tau
    std::vector<double> sigma;       // population std, length tau
    std::vector<std::size_t> counts; // samples aggregated per position
    std::size_t beta = 0;            // number of windows
};

/// A series z-scored against its periodic window statistics.
struct NormalizedSeries {
    std::vector<double> z;
    WindowStats stats;
    WindowConfig config;
    std::string source_label;

    std::size_t length() const { return z.size(); }
};

/// Below this absolute standard deviation a window position is degenerate;
/// normalize() refuses it rather than emitting huge spurious z values.
inline constexpr double sigma_floor = 1e-12;

/// Window count and stride for a series of length L:
///   stride = max(1, floor(tau*(1-alpha)))
///   beta   = floor(L / (tau*(1-alpha))), clamped so every window start
///            u*stride with u < beta stays within the series.
/// Throws when L < tau.
std::pair<std::size_t, std::size_t> window_count(std::size_t L, std::size_t tau, double alpha);

/// mu[k]/sigma[k] over samples {k + u*stride : u < beta, in range} for each
/// window position k. Population (1/n) standard deviation; counts[] records
/// how many samples contributed at the ragged tail.
WindowStats periodic_stats(const TimeSeries& x, const WindowConfig& cfg);

/// z(t) = (x(t) - mu[t mod tau]) / sigma[t mod tau]. Throws naming the first
/// degenerate position when any referenced sigma[k] <= sigma_floor.
NormalizedSeries normalize(const TimeSeries& x, const WindowStats& stats, const WindowConfig& cfg);

} // namespace wvc
