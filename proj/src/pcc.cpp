#include "wvc/pcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wvc/error.hpp"

namespace wvc {

namespace {

// A window whose centered sum of squares is this small (relative to its
// mean's scale) carries no usable variance for a correlation.
bool degenerate_window(double sum_sq, double mean, std::size_t n) {
    return sum_sq <= 1e-24 * static_cast<double>(n) * (1.0 + mean * mean);
}

struct WindowMoments {
    double mean_i = 0.0;
    double mean_j = 0.0;
    double ss_i = 0.0;  // sum of squared deviations
    double ss_j = 0.0;
    double cross = 0.0; // sum of deviation products
};

WindowMoments moments(const std::vector<double>& a, const std::vector<double>& b,
                      const Interval& iv) {
    WindowMoments m;
    const auto n = static_cast<double>(iv.count());
    for (std::size_t t = iv.t1; t <= iv.t2; ++t) {
        m.mean_i += a[t];
        m.mean_j += b[t];
    }
    m.mean_i /= n;
    m.mean_j /= n;
    for (std::size_t t = iv.t1; t <= iv.t2; ++t) {
        const double di = a[t] - m.mean_i;
        const double dj = b[t] - m.mean_j;
        m.ss_i += di * di;
        m.ss_j += dj * dj;
        m.cross += di * dj;
    }
    return m;
}

} // namespace

double pearson(const TimeSeries& xi, const TimeSeries& xj, const Interval& interval) {
    if (xi.length() != xj.length())
        throw ValidationError("series '" + xi.label + "' and '" + xj.label +
                              "' differ in length");
    check_interval(interval, xi.length());
    if (interval.count() < 2)
        throw ValidationError("pearson needs at least 2 samples, got " +
                              std::to_string(interval.count()));

    const WindowMoments m = moments(xi.values, xj.values, interval);
    if (degenerate_window(m.ss_i, m.mean_i, interval.count()))
        throw ValidationError("series '" + xi.label + "': constant window [" +
                              std::to_string(interval.t1) + ", " + std::to_string(interval.t2) +
                              "]");
    if (degenerate_window(m.ss_j, m.mean_j, interval.count()))
        throw ValidationError("series '" + xj.label + "': constant window [" +
                              std::to_string(interval.t1) + ", " + std::to_string(interval.t2) +
                              "]");
    return m.cross / std::sqrt(m.ss_i * m.ss_j);
}

std::pair<double, double> fisher_z(double r, std::size_t n) {
    if (!(std::abs(r) <= 1.0 + 1e-9))
        throw ValidationError("correlation " + format_double(r) + " outside [-1, 1]");
    if (n < 4)
        throw ValidationError("fisher transform needs n >= 4, got " + std::to_string(n));
    const double clamped = std::clamp(r, -pcc_r_max, pcc_r_max);
    const double fisher = std::atanh(clamped);
    return {fisher, fisher * std::sqrt(static_cast<double>(n - 3))};
}

ProbabilityTrace pcc_probability_trace(const TimeSeries& xi, const TimeSeries& xj,
                                       std::size_t window_length, std::size_t stride) {
    if (xi.length() != xj.length())
        throw ValidationError("series '" + xi.label + "' and '" + xj.label +
                              "' differ in length");
    const std::size_t L = xi.length();
    if (window_length < 4 || window_length > L)
        throw ValidationError("trace window length " + std::to_string(window_length) +
                              " out of range [4, " + std::to_string(L) + "]");
    if (stride < 1) throw ValidationError("trace stride must be >= 1");

    constexpr double marker = std::numeric_limits<double>::quiet_NaN();
    ProbabilityTrace trace;
    trace.window_length = window_length;
    trace.stride = stride;
    for (std::size_t s = 0; s + window_length <= L; s += stride) {
        const Interval iv{s, s + window_length - 1};
        trace.centers.push_back(s + window_length / 2);

        const WindowMoments m = moments(xi.values, xj.values, iv);
        if (degenerate_window(m.ss_i, m.mean_i, iv.count()) ||
            degenerate_window(m.ss_j, m.mean_j, iv.count())) {
            // Recorded, not skipped: the marker keeps the grid aligned with
            // the WVC trace and the CSV writer emits empty fields.
            trace.raw.push_back(marker);
            trace.z_scores.push_back(marker);
            trace.probabilities.push_back(marker);
            trace.signed_values.push_back(marker);
            continue;
        }
        const double r = m.cross / std::sqrt(m.ss_i * m.ss_j);
        const auto [fisher, z] = fisher_z(r, iv.count());
        const double p = correlation_probability(z);
        trace.raw.push_back(r);
        trace.z_scores.push_back(z);
        trace.probabilities.push_back(p);
        trace.signed_values.push_back(r < 0.0 ? -p : p);
    }
    return trace;
}

} // namespace wvc
