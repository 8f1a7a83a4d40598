#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lonkit/nk_model.hpp"

namespace lonkit {

/// Two distinct local optima with identical fitness; the basin partition is
/// ill-defined on such a landscape.
class NeutralityError : public std::runtime_error {
public:
    NeutralityError(Genotype a, Genotype b);
    Genotype first;
    Genotype second;
};

/// Best-improvement one-bit-flip ascent starting from `s` whose fitness `fs`
/// is already known. `eval(index)` returns the fitness of a genotype, or
/// nullopt when the caller's budget forbids another evaluation.
///
/// Each step scans all n neighbours and moves to the best one if it is
/// strictly fitter; equal best neighbours go to the lowest flipped locus.
/// Returns false if the ascent was cut short by `eval`, leaving `s`/`fs` at
/// the last accepted point.
template <typename Eval>
bool best_improvement_ascent(int n, std::uint32_t& s, double& fs, Eval&& eval) {
    while (true) {
        std::uint32_t best = s;
        double best_f = 0.0;
        bool have_best = false;
        for (int i = 0; i < n; ++i) {
            const std::uint32_t t = s ^ (1U << i);
            const std::optional<double> ft = eval(t);
            if (!ft) return false;
            if (!have_best || *ft > best_f) {
                best = t;
                best_f = *ft;
                have_best = true;
            }
        }
        if (!have_best || !(best_f > fs)) return true;
        s = best;
        fs = best_f;
    }
}

struct ClimbResult {
    Genotype lo;
    double fitness = 0.0;
    std::uint64_t evals = 0;  // 1 for the start, n per neighbourhood scan
};

ClimbResult hill_climb(const NkInstance& inst, const Genotype& s);

struct LocalOptimum {
    Genotype genotype;
    double fitness = 0.0;
    std::uint64_t basin_size = 0;

    friend bool operator==(const LocalOptimum&, const LocalOptimum&) = default;
};

/// h(s) for every genotype, with the optima ranked by descending fitness so
/// that index 0 is the global optimum.
struct BasinPartition {
    int n = 0;
    std::vector<LocalOptimum> optima;
    std::vector<std::uint32_t> assignment;  // genotype index -> optimum index

    std::size_t size() const { return optima.size(); }
    std::uint32_t basin_of(std::uint32_t genotype) const { return assignment[genotype]; }

    friend bool operator==(const BasinPartition&, const BasinPartition&) = default;
};

/// Exhaustive partition. The one-argument form computes the fitness table;
/// pass a precomputed table (from fitness_table) to reuse it.
/// Throws NeutralityError if two optima share a fitness value.
BasinPartition basin_partition(const NkInstance& inst);
BasinPartition basin_partition(const NkInstance& inst, std::span<const double> fitness);

const LocalOptimum& global_optimum(const BasinPartition& p);

/// CSV exports: (genotype_index, lo_index) per genotype, and
/// (lo_index, genotype_index, fitness, basin_size) per optimum.
void write_assignment(const BasinPartition& p, std::ostream& out);
void write_optima(const BasinPartition& p, std::ostream& out);

}  // namespace lonkit
