#include "lonkit/ils.hpp"

#include <numeric>
#include <optional>

#include "lonkit/basin_hc.hpp"
#include "lonkit/parallel.hpp"
#include "lonkit/rng.hpp"

namespace lonkit {

FitnessSource::FitnessSource(const NkInstance& inst, std::span<const double> table) : inst_(&inst), table_(table) {
    if (!table.empty() && table.size() != (std::size_t{1} << inst.n())) {
        throw ParameterError("fitness table size must be 2^n");
    }
}

namespace {

void validate(const IlsConfig& cfg, int n) {
    if (cfg.fe_max < 1) throw ParameterError("fe_max must be at least 1");
    if (cfg.restarts < 1) throw ParameterError("restarts must be at least 1");
    if (cfg.perturbation_bits < 1 || cfg.perturbation_bits > n) {
        throw ParameterError("perturbation_bits must lie in [1, n]");
    }
}

}  // namespace

RunRecord ils_run(const FitnessSource& f, double go_fitness, const IlsConfig& cfg, std::uint64_t run_seed,
                  IlsTrace* trace) {
    const int n = f.n();
    validate(cfg, n);
    Engine eng(run_seed);

    std::uint64_t fe = 0;
    auto eval = [&](std::uint32_t s) -> std::optional<double> {
        if (fe >= cfg.fe_max) return std::nullopt;
        ++fe;
        return f(s);
    };

    RunRecord rec;
    auto finish = [&](bool success, double incumbent) {
        rec.success = success;
        rec.fe_used = fe;
        rec.best_fitness = incumbent;
        return rec;
    };

    std::uint32_t cur = static_cast<std::uint32_t>(uniform_below(eng, std::uint64_t{1} << n));
    double fcur = *eval(cur);
    if (!best_improvement_ascent(n, cur, fcur, eval)) return finish(false, fcur);
    if (trace) trace->incumbent_fitness.push_back(fcur);
    if (fcur == go_fitness) return finish(true, fcur);

    std::vector<int> loci(static_cast<std::size_t>(n));
    while (fe < cfg.fe_max) {
        std::iota(loci.begin(), loci.end(), 0);
        std::uint32_t cand = cur;
        for (int j = 0; j < cfg.perturbation_bits; ++j) {
            const auto pick = static_cast<std::size_t>(j) + uniform_below(eng, static_cast<std::uint64_t>(n - j));
            std::swap(loci[static_cast<std::size_t>(j)], loci[pick]);
            cand ^= 1U << loci[static_cast<std::size_t>(j)];
        }
        const auto fstart = eval(cand);
        if (!fstart) break;
        double fcand = *fstart;
        if (!best_improvement_ascent(n, cand, fcand, eval)) break;
        if (fcand > fcur) {
            if (trace) trace->accepted.emplace_back(cur, cand);
            cur = cand;
            fcur = fcand;
        }
        if (trace) trace->incumbent_fitness.push_back(fcur);
        if (fcur == go_fitness) return finish(true, fcur);
    }
    return finish(false, fcur);
}

ExperimentResult restart_experiment(const FitnessSource& f, double go_fitness, const IlsConfig& cfg,
                                    unsigned workers) {
    validate(cfg, f.n());
    ExperimentResult out;
    out.runs.resize(cfg.restarts);
    parallel_for(cfg.restarts, workers, [&](std::size_t r) {
        out.runs[r] = ils_run(f, go_fitness, cfg, derive_seed(cfg.master_seed, r));
        out.runs[r].run_index = r;
    });
    std::vector<std::uint64_t> successful;
    for (const auto& run : out.runs) {
        if (run.success) successful.push_back(run.fe_used);
    }
    out.stats = summarize_runs(successful, cfg.restarts, cfg.fe_max);
    return out;
}

}  // namespace lonkit
