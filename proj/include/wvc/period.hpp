#pragma once

#include <cstddef>
#include <vector>

#include "wvc/timeseries.hpp"

namespace wvc {

/// Sample autocorrelation sequence with its significance threshold.
struct AcfResult {
    std::vector<double> rho; // lag 0..tau_max; rho[0] == 1 for non-constant input
    double threshold = 0.0;  // 1.96 / sqrt(L)
    std::size_t L = 0;
};

/// Detected window length plus the derived window layout.
struct PeriodProfile {
    std::size_t tau = 1;
    std::size_t beta = 1;
    std::size_t stride = 1;
    bool detected = false; // false when the tau = 1 fallback fired
    AcfResult acf;
};

/// Sample autocovariance R(lag) = (1/(L-lag)) * sum_t (x(t)-mu)(x(t+lag)-mu)
/// with mu the global mean. Requires 0 <= lag <= L-2.
double autocovariance(const TimeSeries& x, std::size_t lag);

/// rho[lag] = R(lag)/R(0) for lag = 0..tau_max; threshold = 1.96/sqrt(L).
/// Throws on constant signals (R(0) = 0) and out-of-range tau_max.
AcfResult autocorrelation(const TimeSeries& x, std::size_t tau_max);

/// Default lag ceiling: floor(L/2). Longer lags average too few products for
/// a stable estimate.
std::size_t default_tau_max(std::size_t length);

/// Window length search: the smallest lag tau* > 1 with |rho| above the
/// threshold that is a local maximum of signed rho (both neighbors smaller).
/// The endpoint tau_max cannot qualify (no right neighbor). Falls back to
/// tau = 1 with detected = false when no lag qualifies. beta/stride follow
/// window_count(L, tau, alpha).
PeriodProfile detect_period(const TimeSeries& x, std::size_t tau_max, double alpha = 0.0);

} // namespace wvc
