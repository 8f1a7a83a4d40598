#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lonkit {

/// Aggregated outcome of independent ILS restarts on one instance.
struct SuccessStats {
    double ps = 0.0;
    std::optional<double> mean_ts;  // mean FE of successful runs, set iff ps > 0
    std::uint64_t fe_max = 0;
    std::uint64_t n_runs = 0;
    std::uint64_t successes = 0;

    bool solved() const { return successes > 0; }
};

/// `successful_fe` holds the evaluations used by each successful run.
SuccessStats summarize_runs(std::span<const std::uint64_t> successful_fe, std::uint64_t n_runs,
                            std::uint64_t fe_max);

class UndefinedPerformance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Expected evaluations to first success under independent restarts:
/// ((1 - ps) / ps) * fe_max + mean_ts. Throws UndefinedPerformance if ps = 0.
double ets(const SuccessStats& stats);

struct Correlation {
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Mid-ranks (1-based; tied values share the mean of their positions).
std::vector<double> midranks(std::span<const double> x);

/// Sample correlation with a two-sided p-value from the t-transform on n-2
/// degrees of freedom. nullopt when lengths differ, n < 3, or a variance is 0.
std::optional<Correlation> pearson(std::span<const double> x, std::span<const double> y);
std::optional<Correlation> spearman(std::span<const double> x, std::span<const double> y);

/// Long-format correlation table over named variables, pairwise-complete
/// (NaN marks a missing observation).
struct CorrelationEntry {
    std::string var_a;
    std::string var_b;
    std::optional<Correlation> pearson;
    std::optional<Correlation> spearman;
    std::size_t n_obs = 0;
};

std::vector<CorrelationEntry> correlation_matrix(const std::vector<std::string>& names,
                                                 const std::vector<std::vector<double>>& columns);

}  // namespace lonkit
