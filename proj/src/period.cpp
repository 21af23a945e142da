#include "wvc/period.hpp"

#include <cmath>
#include <string>

#include "wvc/error.hpp"
#include "wvc/normalization.hpp"

namespace wvc {

namespace {

double global_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double acvf_at(const std::vector<double>& v, double mu, std::size_t lag) {
    const std::size_t L = v.size();
    double s = 0.0;
    for (std::size_t t = 0; t + lag < L; ++t) s += (v[t] - mu) * (v[t + lag] - mu);
    return s / static_cast<double>(L - lag);
}

// R(0) at or below this (relative to the signal scale) marks a constant
// signal whose residuals are pure rounding noise.
bool effectively_zero(double r0, double mu) { return r0 <= 1e-26 * (1.0 + mu * mu); }

} // namespace

double autocovariance(const TimeSeries& x, std::size_t lag) {
    const std::size_t L = x.length();
    if (L < 2) throw ValidationError("series '" + x.label + "': autocovariance needs L >= 2");
    if (lag > L - 2)
        throw ValidationError("series '" + x.label + "': lag " + std::to_string(lag) +
                              " out of range (max " + std::to_string(L - 2) + ")");
    return acvf_at(x.values, global_mean(x.values), lag);
}

AcfResult autocorrelation(const TimeSeries& x, std::size_t tau_max) {
    const std::size_t L = x.length();
    if (L < 3 || tau_max < 1 || tau_max > L - 2)
        throw ValidationError("series '" + x.label + "': tau_max " + std::to_string(tau_max) +
                              " out of range [1, " + std::to_string(L >= 3 ? L - 2 : 0) + "]");
    const double mu = global_mean(x.values);
    const double r0 = acvf_at(x.values, mu, 0);
    if (effectively_zero(r0, mu))
        throw ValidationError("series '" + x.label + "': zero variance (constant signal)");

    AcfResult acf;
    acf.L = L;
    acf.threshold = 1.96 / std::sqrt(static_cast<double>(L));
    acf.rho.resize(tau_max + 1);
    for (std::size_t lag = 0; lag <= tau_max; ++lag)
        acf.rho[lag] = acvf_at(x.values, mu, lag) / r0;
    acf.rho[0] = 1.0;
    return acf;
}

std::size_t default_tau_max(std::size_t length) { return length / 2; }

PeriodProfile detect_period(const TimeSeries& x, std::size_t tau_max, double alpha) {
    const std::size_t L = x.length();
    if (L < 4 || tau_max < 2 || tau_max > L - 2)
        throw ValidationError("series '" + x.label + "': tau_max " + std::to_string(tau_max) +
                              " out of range [2, " + std::to_string(L >= 4 ? L - 2 : 0) + "]");

    PeriodProfile profile;
    profile.acf = autocorrelation(x, tau_max);
    const std::vector<double>& rho = profile.acf.rho;
    const double threshold = profile.acf.threshold;

    // First lag above 1 that clears the significance threshold in magnitude
    // and peaks against both neighbors; the endpoint lacks a right neighbor.
    for (std::size_t lag = 2; lag + 1 <= tau_max; ++lag) {
        if (std::abs(rho[lag]) > threshold && rho[lag] > rho[lag - 1] && rho[lag] > rho[lag + 1]) {
            profile.tau = lag;
            profile.detected = true;
            break;
        }
    }
    auto [beta, stride] = window_count(L, profile.tau, alpha);
    profile.beta = beta;
    profile.stride = stride;
    return profile;
}

} // namespace wvc
