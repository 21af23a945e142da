#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wvc/metric.hpp"
#include "wvc/synthetic.hpp"

namespace wvc {

/// RMSE of one metric's probability trace against windowed ground truth.
struct EvalReport {
    std::string metric_name;
    double rmse = 0.0;
    std::size_t n_windows = 0;  // windows scored
    std::size_t n_excluded = 0; // degenerate windows dropped
    std::string scenario;
};

/// Window-level truth: majority of binary truth labels over each window's
/// sample span, ties resolved to 1. One value in {0,1} per trace window.
std::vector<double> align_truth(const GroundTruth& truth, const ProbabilityTrace& trace);

/// sqrt(mean((p_k - truth_k)^2)) over entries whose probability is not a
/// degenerate NaN marker. Throws when every entry is excluded.
double rmse(const std::vector<double>& probabilities, const std::vector<double>& truth);

/// Head-to-head on one shared window grid: WVC report first, PCC second.
/// Degenerate PCC windows are excluded from both metrics so the comparison
/// stays paired. window_length/stride of 0 select the defaults
/// (2*max(tau_i, tau_j) and a quarter of that) from the detected periods.
std::pair<EvalReport, EvalReport> run_comparison(const MultiSeries& data, const GroundTruth& truth,
                                                 std::size_t window_length = 0,
                                                 std::size_t stride = 0,
                                                 VarianceModel model = VarianceModel::analytic,
                                                 const std::string& scenario_name = "scenario");

/// Report JSON: {scenario, window_length, stride,
///               metrics:[{name, rmse, n_windows, n_excluded}]}.
std::string report_to_json(const EvalReport& wvc_report, const EvalReport& pcc_report,
                           std::size_t window_length, std::size_t stride);

/// Two-row text table (PCC row first, then WVC).
std::string format_report_table(const EvalReport& wvc_report, const EvalReport& pcc_report);

} // namespace wvc
