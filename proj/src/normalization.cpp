#include "wvc/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wvc/error.hpp"

namespace wvc {

std::pair<std::size_t, std::size_t> window_count(std::size_t L, std::size_t tau, double alpha) {
    if (tau < 1) throw ValidationError("tau must be >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw ValidationError("alpha must lie in [0,1), got " + format_double(alpha));
    if (L < tau)
        throw ValidationError("window length " + std::to_string(tau) +
                              " exceeds series length " + std::to_string(L));
    // Small epsilon on both floors so products and divisions that are exact
    // in real arithmetic (150*(1-0.9), 3000/150, ...) do not round down.
    const double span = static_cast<double>(tau) * (1.0 - alpha);
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::floor(span + 1e-9)));
    auto beta = static_cast<std::size_t>(std::floor(static_cast<double>(L) / span + 1e-9));
    const std::size_t max_starts = (L - 1) / stride + 1;
    beta = std::clamp<std::size_t>(beta, 1, max_starts);
    return {beta, stride};
}

WindowStats periodic_stats(const TimeSeries& x, const WindowConfig& cfg) {
    const std::size_t L = x.length();
    auto [beta, stride] = window_count(L, cfg.tau, cfg.alpha);

    WindowStats stats;
    stats.beta = beta;
    stats.mu.assign(cfg.tau, 0.0);
    stats.sigma.assign(cfg.tau, 0.0);
    stats.counts.assign(cfg.tau, 0);

    // Window u = 0 covers every position, so counts[k] >= 1 always holds.
    for (std::size_t u = 0; u < beta; ++u) {
        const std::size_t base = u * stride;
        const std::size_t limit = std::min(cfg.tau, L - base);
        for (std::size_t k = 0; k < limit; ++k) {
            stats.mu[k] += x.values[base + k];
            ++stats.counts[k];
        }
    }
    for (std::size_t k = 0; k < cfg.tau; ++k) stats.mu[k] /= static_cast<double>(stats.counts[k]);

    // Second pass for the variance: better conditioned than mean-of-squares
    // minus squared-mean when |mu| dwarfs sigma, and exactly zero for
    // exactly repeating inputs.
    for (std::size_t u = 0; u < beta; ++u) {
        const std::size_t base = u * stride;
        const std::size_t limit = std::min(cfg.tau, L - base);
        for (std::size_t k = 0; k < limit; ++k) {
            const double d = x.values[base + k] - stats.mu[k];
            stats.sigma[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < cfg.tau; ++k)
        stats.sigma[k] = std::sqrt(stats.sigma[k] / static_cast<double>(stats.counts[k]));
    return stats;
}

NormalizedSeries normalize(const TimeSeries& x, const WindowStats& stats, const WindowConfig& cfg) {
    const std::size_t L = x.length();
    if (cfg.tau < 1) throw ValidationError("tau must be >= 1");
    if (stats.mu.size() != cfg.tau || stats.sigma.size() != cfg.tau)
        throw ValidationError("window stats cover " + std::to_string(stats.mu.size()) +
                              " positions, config expects " + std::to_string(cfg.tau));

    const std::size_t referenced = std::min(cfg.tau, L);
    for (std::size_t k = 0; k < referenced; ++k)
        if (!(stats.sigma[k] > sigma_floor))
            throw ValidationError("series '" + x.label + "': degenerate window position " +
                                  std::to_string(k) +
                                  " (sigma below floor; exactly periodic or constant input)");

    NormalizedSeries out;
    out.stats = stats;
    out.config = cfg;
    out.source_label = x.label;
    out.z.resize(L);
    for (std::size_t t = 0; t < L; ++t) {
        const std::size_t k = t % cfg.tau;
        out.z[t] = (x.values[t] - stats.mu[k]) / stats.sigma[k];
    }
    return out;
}

} // namespace wvc
