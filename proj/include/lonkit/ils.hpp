#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lonkit/nk_model.hpp"
#include "lonkit/perf_stats.hpp"

namespace lonkit {

struct IlsConfig {
    std::uint64_t fe_max = 0;
    std::uint64_t restarts = 500;
    int perturbation_bits = 2;
    std::uint64_t master_seed = 0;

    /// floor(2^n / 5), i.e. one fifth of the search space.
    static std::uint64_t default_fe_max(int n) { return (std::uint64_t{1} << n) / 5; }
};

struct RunRecord {
    bool success = false;
    std::uint64_t fe_used = 0;
    double best_fitness = 0.0;
    std::uint64_t run_index = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Optional observer of a run: every accepted move between optima
/// (genotype indices) and the incumbent fitness after each acceptance test.
struct IlsTrace {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> accepted;
    std::vector<double> incumbent_fitness;
};

/// Evaluates genotypes from a precomputed table when one is given (size 2^n),
/// otherwise directly from the instance.
class FitnessSource {
public:
    explicit FitnessSource(const NkInstance& inst, std::span<const double> table = {});
    double operator()(std::uint32_t genotype) const {
        return table_.empty() ? inst_->fitness(genotype) : table_[genotype];
    }
    int n() const { return inst_->n(); }

private:
    const NkInstance* inst_;
    std::span<const double> table_;
};

/// One Iterated Local Search run: random start, best-improvement climb, then
/// repeated k-bit perturbation + climb with strict-improvement acceptance.
/// Every fitness evaluation counts toward fe_max; the evaluation that reaches
/// the budget completes and the run then stops. Success means an accepted
/// incumbent whose fitness equals go_fitness.
RunRecord ils_run(const FitnessSource& f, double go_fitness, const IlsConfig& cfg, std::uint64_t run_seed,
                  IlsTrace* trace = nullptr);

struct ExperimentResult {
    SuccessStats stats;
    std::vector<RunRecord> runs;
};

/// cfg.restarts independent runs; run r uses derive_seed(master_seed, r), so
/// results do not depend on `workers`.
ExperimentResult restart_experiment(const FitnessSource& f, double go_fitness, const IlsConfig& cfg,
                                    unsigned workers = 1);

}  // namespace lonkit
