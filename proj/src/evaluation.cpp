#include "wvc/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "wvc/error.hpp"
#include "wvc/pcc.hpp"
#include "wvc/period.hpp"

namespace wvc {

std::vector<double> align_truth(const GroundTruth& truth, const ProbabilityTrace& trace) {
    const std::size_t L = truth.length();
    const std::size_t wl = trace.window_length;
    std::vector<double> aligned;
    aligned.reserve(trace.size());
    for (const std::size_t center : trace.centers) {
        if (center < wl / 2 || center - wl / 2 + wl > L)
            throw ValidationError("trace window at center " + std::to_string(center) +
                                  " falls outside the truth sequence (L=" + std::to_string(L) +
                                  ")");
        const std::size_t start = center - wl / 2;
        std::size_t ones = 0;
        for (std::size_t t = start; t < start + wl; ++t)
            if (truth.labels[t] != 0) ++ones;
        // Majority vote over the span; exact ties count as correlated.
        aligned.push_back(2 * ones >= wl ? 1.0 : 0.0);
    }
    return aligned;
}

double rmse(const std::vector<double>& probabilities, const std::vector<double>& truth) {
    if (probabilities.size() != truth.size())
        throw ValidationError("rmse inputs differ in length: " +
                              std::to_string(probabilities.size()) + " vs " +
                              std::to_string(truth.size()));
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        if (std::isnan(probabilities[k])) continue; // degenerate marker
        const double d = probabilities[k] - truth[k];
        sum += d * d;
        ++n;
    }
    if (n == 0) throw ValidationError("rmse: every window is excluded as degenerate");
    return std::sqrt(sum / static_cast<double>(n));
}

std::pair<EvalReport, EvalReport> run_comparison(const MultiSeries& data, const GroundTruth& truth,
                                                 std::size_t window_length, std::size_t stride,
                                                 VarianceModel model,
                                                 const std::string& scenario_name) {
    validate(data);
    if (data.dim() < 2)
        throw ValidationError("comparison needs at least 2 signals, got " +
                              std::to_string(data.dim()));
    if (truth.length() != data.length())
        throw ValidationError("truth length " + std::to_string(truth.length()) +
                              " does not match data length " + std::to_string(data.length()));

    const TimeSeries& xi = data.at(0);
    const TimeSeries& xj = data.at(1);
    const std::size_t L = data.length();

    const PeriodProfile prof_i = detect_period(xi, default_tau_max(L));
    const PeriodProfile prof_j = detect_period(xj, default_tau_max(L));
    if (window_length == 0) {
        auto [wl, st] = default_trace_grid(prof_i.tau, prof_j.tau);
        window_length = wl;
        if (stride == 0) stride = st;
    }
    if (stride == 0) stride = std::max<std::size_t>(1, window_length / 4);

    const WindowConfig cfg_i{0.0, prof_i.tau};
    const WindowConfig cfg_j{0.0, prof_j.tau};
    const NormalizedSeries zi = normalize(xi, periodic_stats(xi, cfg_i), cfg_i);
    const NormalizedSeries zj = normalize(xj, periodic_stats(xj, cfg_j), cfg_j);

    const ProbabilityTrace wvc_trace = probability_trace(zi, zj, window_length, stride, model);
    const ProbabilityTrace pcc_trace = pcc_probability_trace(xi, xj, window_length, stride);
    const std::vector<double> aligned = align_truth(truth, wvc_trace);

    // Windows where the PCC is degenerate drop out of both metrics so the
    // head-to-head stays paired.
    std::vector<double> wvc_p, pcc_p, kept_truth;
    std::size_t excluded = 0;
    for (std::size_t k = 0; k < wvc_trace.size(); ++k) {
        if (std::isnan(pcc_trace.probabilities[k])) {
            ++excluded;
            continue;
        }
        wvc_p.push_back(wvc_trace.probabilities[k]);
        pcc_p.push_back(pcc_trace.probabilities[k]);
        kept_truth.push_back(aligned[k]);
    }
    if (kept_truth.empty())
        throw ValidationError("every comparison window is degenerate");

    EvalReport wvc_report{"WVC", rmse(wvc_p, kept_truth), kept_truth.size(), excluded,
                          scenario_name};
    EvalReport pcc_report{"PCC", rmse(pcc_p, kept_truth), kept_truth.size(), excluded,
                          scenario_name};
    return {wvc_report, pcc_report};
}

std::string report_to_json(const EvalReport& wvc_report, const EvalReport& pcc_report,
                           std::size_t window_length, std::size_t stride) {
    nlohmann::json j;
    j["scenario"] = wvc_report.scenario;
    j["window_length"] = window_length;
    j["stride"] = stride;
    j["metrics"] = nlohmann::json::array();
    for (const EvalReport* rep : {&pcc_report, &wvc_report}) {
        j["metrics"].push_back({{"name", rep->metric_name},
                                {"rmse", rep->rmse},
                                {"n_windows", rep->n_windows},
                                {"n_excluded", rep->n_excluded}});
    }
    return j.dump(2) + "\n";
}

std::string format_report_table(const EvalReport& wvc_report, const EvalReport& pcc_report) {
    char line[128];
    std::string table = "metric  rmse      windows  excluded\n";
    for (const EvalReport* rep : {&pcc_report, &wvc_report}) {
        std::snprintf(line, sizeof(line), "%-6s  %.6f  %-7zu  %zu\n", rep->metric_name.c_str(),
                      rep->rmse, rep->n_windows, rep->n_excluded);
        table += line;
    }
    return table;
}

} // namespace wvc
