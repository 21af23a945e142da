#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "wvc/timeseries.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "wvc_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const fs::path out_path = work_dir() / "stdout.txt";
    const fs::path err_path = work_dir() / "stderr.txt";
    const std::string cmd = std::string(WVC_CLI_PATH) + " " + args + " >" + out_path.string() +
                            " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

// Column of a headered CSV as doubles; empty cells become NaN.
std::vector<double> csv_column(const fs::path& path, std::size_t column) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t start = 0;
        std::string cell;
        for (std::size_t c = 0; c <= column; ++c) {
            const std::size_t comma = line.find(',', start);
            cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                 : comma - start);
            if (comma == std::string::npos && c < column) {
                cell.clear();
                break;
            }
            start = comma + 1;
        }
        values.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    }
    return values;
}

std::string first_line(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

// Lazily simulated shared inputs (each CLI test reuses the same files).
std::string independent_prefix() {
    static const std::string prefix = [] {
        const std::string p = (work_dir() / "ind").string();
        REQUIRE(run_cli("simulate --default-independent --out " + p).exit_code == 0);
        return p;
    }();
    return prefix;
}

std::string modulated_prefix() {
    static const std::string prefix = [] {
        const std::string p = (work_dir() / "mod").string();
        REQUIRE(run_cli("simulate --default-modulated --out " + p).exit_code == 0);
        return p;
    }();
    return prefix;
}

// A two-column CSV holding the same white noise twice, for duplicate-signal
// checks.
fs::path duplicate_csv() {
    static const fs::path path = [] {
        wvc::MultiSeries ms;
        ms.series.resize(2);
        ms.series[0].label = "a";
        ms.series[0].values = oracle::white_noise(1200, 0xC11B);
        ms.series[1] = ms.series[0];
        ms.series[1].label = "b";
        const fs::path p = work_dir() / "dup.csv";
        wvc::save_multiseries(ms, p, wvc::FileFormat::csv);
        return p;
    }();
    return path;
}

} // namespace

TEST_CASE("simulate writes data and truth files deterministically") {
    const std::string prefix = independent_prefix();
    const fs::path data = prefix + "_data.csv";
    const fs::path truth = prefix + "_truth.csv";
    REQUIRE(fs::exists(data));
    REQUIRE(fs::exists(truth));
    CHECK(first_line(data) == "time,sine,ig");
    CHECK(first_line(truth) == "time,label");

    // Independent scenario: every truth label is zero.
    const std::vector<double> labels = csv_column(truth, 1);
    REQUIRE(labels.size() == 4800);
    for (double v : labels) CHECK(v == 0.0);

    // Re-running the same command reproduces both files byte for byte.
    const std::string data_bytes = read_file(data);
    const std::string truth_bytes = read_file(truth);
    const std::string rerun = (work_dir() / "ind_rerun").string();
    REQUIRE(run_cli("simulate --default-independent --out " + rerun).exit_code == 0);
    CHECK(read_file(rerun + "_data.csv") == data_bytes);
    CHECK(read_file(rerun + "_truth.csv") == truth_bytes);
}

TEST_CASE("simulate modulated scenario carries mixed truth labels") {
    const std::string prefix = modulated_prefix();
    const std::vector<double> labels = csv_column(prefix + "_truth.csv", 1);
    REQUIRE(labels.size() == 4800);
    CHECK(labels[480] == 1.0);
    CHECK(labels[1680] == -1.0);
    CHECK(labels[0] == 0.0);
}

TEST_CASE("simulate flag validation") {
    const std::string out = (work_dir() / "x").string();
    // Mutually exclusive sources.
    CHECK(run_cli("simulate --default-independent --default-modulated --out " + out).exit_code ==
          1);
    // No source at all.
    CHECK(run_cli("simulate --out " + out).exit_code == 1);
    // Config file that does not exist is an I/O failure.
    CHECK(run_cli("simulate --config " + (work_dir() / "missing.json").string() + " --out " + out)
              .exit_code == 2);
    // Malformed config is a validation failure.
    const fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << "{not json";
    CHECK(run_cli("simulate --config " + bad.string() + " --out " + out).exit_code == 1);
    // Unknown config fields are named in the error.
    const fs::path unknown = work_dir() / "unknown.json";
    std::ofstream(unknown) << R"({"sine_perriod": 100})";
    const RunResult r = run_cli("simulate --config " + unknown.string() + " --out " + out);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("sine_perriod") != std::string::npos);
}

TEST_CASE("detect-period reports both benchmark periods") {
    const fs::path out = work_dir() / "periods.json";
    const RunResult r = run_cli("detect-period --input " + independent_prefix() +
                                "_data.csv --out " + out.string());
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["label"] == "sine");
    CHECK(j[0]["tau"] == 150);
    CHECK(j[0]["detected"] == true);
    CHECK(j[1]["label"] == "ig");
    CHECK(j[1]["tau"] == 240);
    CHECK(j[1]["detected"] == true);

    // Restricting to one label yields a single object.
    const RunResult single = run_cli("detect-period --input " + independent_prefix() +
                                     "_data.csv --label ig --out " + out.string());
    REQUIRE(single.exit_code == 0);
    const nlohmann::json js = nlohmann::json::parse(read_file(out));
    CHECK(js.is_object());
    CHECK(js["label"] == "ig");
    CHECK(js["tau"] == 240);

    // Unknown label fails with the label in the message.
    const RunResult bad = run_cli("detect-period --input " + independent_prefix() +
                                  "_data.csv --label bogus --out " + out.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("bogus") != std::string::npos);
}

TEST_CASE("normalize emits a z-scored multiseries on the same grid") {
    const fs::path out = work_dir() / "normalized.csv";
    const RunResult r =
        run_cli("normalize --input " + independent_prefix() +
                "_data.csv --tau sine=150 --tau ig=240 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(first_line(out) == "time,sine,ig");
    const std::vector<double> z_sine = csv_column(out, 1);
    REQUIRE(z_sine.size() == 4800);
    double mean = 0.0;
    for (double v : z_sine) mean += v;
    CHECK(std::abs(mean / 4800.0) < 1e-9); // z-scores come out centered

    // Overrides naming unknown signals fail.
    CHECK(run_cli("normalize --input " + independent_prefix() +
                  "_data.csv --tau bogus=10 --out " + out.string())
              .exit_code == 1);
}

TEST_CASE("analyze wvc on independent signals yields near-zero z-scores") {
    const fs::path out = work_dir() / "trace_wvc.csv";
    const RunResult r = run_cli("analyze --input " + independent_prefix() +
                                "_data.csv --metric wvc --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(first_line(out) == "center,raw,z,probability,signed");
    const std::vector<double> z = csv_column(out, 2);
    REQUIRE(z.size() == 37); // default grid: window 480, stride 120
    double mean_abs = 0.0;
    for (double v : z) mean_abs += std::abs(v);
    mean_abs /= static_cast<double>(z.size());
    CHECK(mean_abs < 0.05);
}

TEST_CASE("analyze pcc saturates on a duplicated signal") {
    const fs::path out = work_dir() / "trace_pcc.csv";
    const RunResult r = run_cli("analyze --input " + duplicate_csv().string() +
                                " --metric pcc --window 100 --stride 100 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    const std::vector<double> p = csv_column(out, 3);
    REQUIRE(p.size() == 12);
    for (double v : p) CHECK(v > 0.99);
}

TEST_CASE("analyze argument validation") {
    const std::string input = independent_prefix() + "_data.csv";
    const std::string out = (work_dir() / "t.csv").string();
    CHECK(run_cli("analyze --input " + input + " --metric wvc --pair 0,5 --out " + out)
              .exit_code == 1);
    CHECK(run_cli("analyze --input " + input + " --metric bogus --out " + out).exit_code == 1);
    CHECK(run_cli("analyze --input " + input + " --out " + out).exit_code == 1); // metric required
    CHECK(run_cli("analyze --input " + (work_dir() / "missing.csv").string() +
                  " --metric wvc --out " + out)
              .exit_code == 2);
}

TEST_CASE("graph on the independent scenario stays insignificant") {
    const fs::path out = work_dir() / "graph.json";
    const RunResult r = run_cli("graph --input " + independent_prefix() +
                                "_data.csv --t1 0 --t2 4799 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["labels"] == nlohmann::json({"sine", "ig"}));
    CHECK(j["interval"]["t1"] == 0);
    CHECK(j["interval"]["t2"] == 4799);
    const double p = j["probabilities"][0][1].get<double>();
    CHECK(p < 0.7);
    CHECK(j["weights"][0][1] == j["weights"][1][0]);
    CHECK(j["weights"][0][0] == 0.0);

    // Reversed interval fails.
    CHECK(run_cli("graph --input " + independent_prefix() +
                  "_data.csv --t1 100 --t2 50 --out " + out.string())
              .exit_code == 1);
}

TEST_CASE("graph resolves stronger coupling inside a modulated block") {
    const std::string input = modulated_prefix() + "_data.csv";
    const fs::path block = work_dir() / "graph_block.json";
    const fs::path neutral = work_dir() / "graph_neutral.json";
    REQUIRE(run_cli("graph --input " + input + " --t1 2880 --t2 3359 --out " + block.string())
                .exit_code == 0);
    REQUIRE(run_cli("graph --input " + input + " --t1 0 --t2 479 --out " + neutral.string())
                .exit_code == 0);
    const double p_block =
        nlohmann::json::parse(read_file(block))["probabilities"][0][1].get<double>();
    const double p_neutral =
        nlohmann::json::parse(read_file(neutral))["probabilities"][0][1].get<double>();
    CHECK(p_block > p_neutral);
}

TEST_CASE("graph honors --seconds with a non-unit sample interval") {
    // Hand-built series sampled every 0.5 s: second 3.0 is sample 6.
    wvc::MultiSeries ms;
    ms.series.resize(2);
    ms.series[0].label = "a";
    ms.series[0].values = oracle::white_noise(16, 0x5EC);
    ms.series[0].sample_interval = 0.5;
    ms.series[1].label = "b";
    ms.series[1].values = oracle::white_noise(16, 0x5ED);
    ms.series[1].sample_interval = 0.5;
    const fs::path input = work_dir() / "halfsec.csv";
    wvc::save_multiseries(ms, input, wvc::FileFormat::csv);

    const fs::path out = work_dir() / "graph_sec.json";
    const RunResult r = run_cli("graph --input " + input.string() +
                                " --t1 1 --t2 3 --seconds --tau a=1 --tau b=1 --out " +
                                out.string());
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["interval"]["t1"] == 2);
    CHECK(j["interval"]["t2"] == 6);
}

TEST_CASE("evaluate prints the comparison table and writes the report") {
    const fs::path out = work_dir() / "report.json";
    const RunResult r = run_cli("evaluate --input " + independent_prefix() + "_data.csv --truth " +
                                independent_prefix() + "_truth.csv --out " + out.string());
    REQUIRE(r.exit_code == 0);

    // Table on stdout: header plus PCC row before WVC row.
    CHECK(r.out.find("metric") == 0);
    const auto pcc_pos = r.out.find("PCC");
    const auto wvc_pos = r.out.find("WVC");
    REQUIRE(pcc_pos != std::string::npos);
    REQUIRE(wvc_pos != std::string::npos);
    CHECK(pcc_pos < wvc_pos);

    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["window_length"] == 480);
    CHECK(j["stride"] == 120);
    REQUIRE(j["metrics"].size() == 2);
    CHECK(j["metrics"][0]["name"] == "PCC");
    CHECK(j["metrics"][1]["name"] == "WVC");
    CHECK(j["metrics"][1]["n_windows"] == 37);
    // On independent data the null-calibrated WVC beats the PCC baseline.
    const double wvc_rmse = j["metrics"][1]["rmse"].get<double>();
    const double pcc_rmse = j["metrics"][0]["rmse"].get<double>();
    CHECK(wvc_rmse < 0.1);
    CHECK(pcc_rmse > 0.5);
    CHECK(wvc_rmse < pcc_rmse);

    // Determinism: identical bytes and identical stdout on a second run.
    const std::string report_bytes = read_file(out);
    const fs::path out2 = work_dir() / "report2.json";
    const RunResult r2 = run_cli("evaluate --input " + independent_prefix() +
                                 "_data.csv --truth " + independent_prefix() + "_truth.csv --out " +
                                 out2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(out2) == report_bytes);
    CHECK(r2.out == r.out);
}

TEST_CASE("evaluate rejects truth of the wrong length with both lengths named") {
    const fs::path short_truth = work_dir() / "short_truth.csv";
    {
        std::ofstream out(short_truth);
        out << "time,label\n";
        for (int t = 0; t < 100; ++t) out << t << ",0\n";
    }
    const RunResult r = run_cli("evaluate --input " + independent_prefix() + "_data.csv --truth " +
                                short_truth.string() + " --out " +
                                (work_dir() / "r.json").string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("100") != std::string::npos);
    CHECK(r.err.find("4800") != std::string::npos);
}

TEST_CASE("top-level CLI behavior") {
    CHECK(run_cli("--help").exit_code == 0);
    const RunResult help = run_cli("--help");
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(help.out.find("evaluate") != std::string::npos);
    CHECK(run_cli("").exit_code == 1);          // a subcommand is required
    CHECK(run_cli("frobnicate").exit_code == 1); // unknown subcommand
    CHECK(run_cli("evaluate --truth x --out y").exit_code == 1); // missing required --input
}
