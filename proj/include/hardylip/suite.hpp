#pragma once

#include <string>
#include <vector>

#include "hardylip/json_io.hpp"

namespace hardylip {

// Batch verification drive: which graph, which suites, which grids.
struct SuiteConfig {
    std::string graph_source;  // builtin name or path, echoed in reports
    LipschitzGraph graph;
    std::vector<std::string> suites;
    QuadratureSpec quadrature;
    std::vector<double> tau_grid;
    std::vector<double> y_grid;
    std::vector<Complex> alpha_grid;  // exterior points for annihilation
    std::vector<Complex> probes;      // half-plane probes
    std::vector<int> j_range;
    std::string out_dir = ".";

    static const std::vector<std::string>& known_suites();
    static SuiteConfig from_json(const Json& j);
    Json to_json() const;
    void validate() const;
};

struct SuiteRecord {
    std::string suite;
    int index = 0;
    Certificate cert;
    std::string status;  // pass | fail | error
    std::string message;
};

struct SuiteReport {
    std::string artifact_version;
    Json config_echo;
    std::vector<SuiteRecord> records;
    Json series;  // plottable sweeps: tau_sweep, caratheodory
    int pass = 0, fail = 0, error = 0;
    double wall_time_s = 0.0;
    std::string timestamp_iso;

    Json to_json() const;
};

SuiteReport run_suite(const SuiteConfig& config);

// report.json plus per-sweep CSV files with header rows.
void write_report_json(const SuiteReport& report, const std::string& path);
void write_csv_bundle(const Json& report_json, const std::string& out_dir);

// Number of worker threads for certificate sweeps: HARDYLIP_THREADS if set,
// otherwise the available parallelism.
int suite_thread_count();

}  // namespace hardylip
