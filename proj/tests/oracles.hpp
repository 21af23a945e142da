// Independent brute-force reference implementations. These deliberately take
// the most literal route (no shared code with the library) so agreement is
// meaningful.
#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

// Sample autocovariance, literal definition with the 1/(L-lag) divisor.
inline double acvf(const std::vector<double>& x, std::size_t lag) {
    const std::size_t L = x.size();
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(L);
    double s = 0.0;
    for (std::size_t t = 0; t + lag < L; ++t) s += (x[t] - mu) * (x[t + lag] - mu);
    return s / static_cast<double>(L - lag);
}

struct BruteStats {
    std::vector<double> mu, sigma;
    std::vector<std::size_t> counts;
};

// Per-position window statistics gathered one position at a time, straight
// from the definitions: mu[k] is the mean of the samples at position k and
// sigma[k] the square root of their mean squared deviation.
inline BruteStats brute_periodic_stats(const std::vector<double>& x, std::size_t tau,
                                       std::size_t beta, std::size_t stride) {
    const std::size_t L = x.size();
    BruteStats out;
    out.mu.assign(tau, 0.0);
    out.sigma.assign(tau, 0.0);
    out.counts.assign(tau, 0);
    for (std::size_t k = 0; k < tau; ++k) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t u = 0; u < beta; ++u) {
            const std::size_t idx = k + u * stride;
            if (idx > L - 1) continue;
            sum += x[idx];
            ++n;
        }
        out.counts[k] = n;
        out.mu[k] = sum / static_cast<double>(n);
        double dev_sq = 0.0;
        for (std::size_t u = 0; u < beta; ++u) {
            const std::size_t idx = k + u * stride;
            if (idx > L - 1) continue;
            const double d = x[idx] - out.mu[k];
            dev_sq += d * d;
        }
        out.sigma[k] = std::sqrt(dev_sq / static_cast<double>(n));
    }
    return out;
}

// Two-pass Pearson correlation, textbook form.
inline double brute_pearson(const std::vector<double>& a, const std::vector<double>& b,
                            std::size_t t1, std::size_t t2) {
    const auto n = static_cast<double>(t2 - t1 + 1);
    double ma = 0.0, mb = 0.0;
    for (std::size_t t = t1; t <= t2; ++t) {
        ma += a[t];
        mb += b[t];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t t = t1; t <= t2; ++t) {
        saa += (a[t] - ma) * (a[t] - ma);
        sbb += (b[t] - mb) * (b[t] - mb);
        sab += (a[t] - ma) * (b[t] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Seeded i.i.d. standard normal draw shared by the statistical tests.
inline std::vector<double> white_noise(std::size_t L, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    std::vector<double> out(L);
    for (double& v : out) v = normal(rng);
    return out;
}

} // namespace oracle
