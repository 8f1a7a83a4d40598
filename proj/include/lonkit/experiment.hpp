#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lonkit/ils.hpp"
#include "lonkit/lon.hpp"
#include "lonkit/lon_metrics.hpp"

namespace lonkit {

/// A sweep over (n, k, seed) triples. Plan files are flat `key = value`
/// text; `#` starts a comment. Keys: n, k_list (comma separated),
/// seeds_per_k, first_seed, d, fe_max (0 = floor(2^n/5)), restarts,
/// master_seed, out, workers, path_length (true/false).
struct ExperimentPlan {
    int n = 18;
    std::vector<int> k_list{2, 4, 6, 8, 10, 12, 14, 16, 17};
    int seeds_per_k = 30;
    std::uint64_t first_seed = 1;
    int d = 2;
    std::uint64_t fe_max = 0;
    std::uint64_t restarts = 500;
    std::uint64_t master_seed = 0;
    std::string out_dir = "lon_out";
    unsigned workers = 1;
    bool path_length = true;

    std::uint64_t effective_fe_max() const { return fe_max ? fe_max : IlsConfig::default_fe_max(n); }
    std::vector<InstanceId> instances() const;
    void validate() const;  // throws ParameterError
};

ExperimentPlan read_plan(std::istream& in);
void write_plan(const ExperimentPlan& plan, std::ostream& out);

/// ILS master seed for one instance of a plan.
std::uint64_t instance_master_seed(std::uint64_t plan_master, const InstanceId& id);

/// Resumability key: hex digest of (n, k, seed, d, fe_max, restarts, master).
std::string instance_key(const ExperimentPlan& plan, const InstanceId& id);

struct InstanceOutcome {
    Lon lon;
    LonMetricsRow metrics;
    ExperimentResult ils;
    std::optional<double> ets;
};

/// generate -> partition -> extract -> metrics -> restart experiment -> ets.
InstanceOutcome run_instance(const InstanceId& id, int d, const IlsConfig& ils, const MetricsOptions& mopts,
                             unsigned ils_workers = 1);

std::vector<std::string> metrics_header();
std::vector<std::string> metrics_cells(const LonMetricsRow& row, const SuccessStats& stats);
std::vector<std::string> runs_header();
std::vector<std::string> run_cells(const InstanceId& id, const RunRecord& run);

struct SweepSummary {
    std::size_t computed = 0;
    std::size_t skipped = 0;
    std::vector<std::string> failures;  // "<label>: <message>"
};

/// Runs every instance of the plan not already recorded as complete in
/// <out>/manifest.txt, then assembles <out>/metrics.csv and <out>/runs.csv.
SweepSummary run_sweep(const ExperimentPlan& plan, std::ostream& log);

/// One instance as seen by the analysis: metrics plus expected runtime
/// (nullopt when never solved).
struct ReportRow {
    LonMetricsRow metrics;
    SuccessStats stats;
    std::optional<double> ets;
};

class OrphanError : public std::runtime_error {
public:
    explicit OrphanError(std::vector<std::string> orphans);
    std::vector<std::string> orphans;
};

/// Joins a metrics CSV with a runs CSV; throws OrphanError if the instance
/// sets differ.
std::vector<ReportRow> load_report_rows(const std::string& metrics_csv, const std::string& runs_csv);

/// Names of the analysed variables, in column order.
const std::vector<std::string>& metric_names();
/// Value of a named variable ("k", "nv", ..., "ets"); NaN when undefined.
double metric_value(const ReportRow& row, const std::string& name);

struct ReportSummary {
    std::optional<std::vector<std::string>> final_terms;  // nullopt if fitting failed
    std::size_t excluded_unsolved = 0;
};

/// Writes table1.txt, spearman_ets.csv, correlations.csv,
/// regression_full.txt, regression_final.txt, residuals.csv, qq.csv and
/// partial_residuals.csv into out_dir.
ReportSummary write_report(const std::vector<ReportRow>& rows, const std::string& out_dir,
                           const std::string& provenance);

}  // namespace lonkit
