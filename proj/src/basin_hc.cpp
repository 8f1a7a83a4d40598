#include "lonkit/basin_hc.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace lonkit {

NeutralityError::NeutralityError(Genotype a, Genotype b)
    : std::runtime_error("local optima " + a.to_string() + " and " + b.to_string() +
                         " have identical fitness"),
      first(a),
      second(b) {}

ClimbResult hill_climb(const NkInstance& inst, const Genotype& s) {
    if (s.length() != inst.n()) throw ParameterError("genotype length differs from instance n");
    std::uint64_t evals = 1;
    std::uint32_t cur = s.index();
    double fcur = inst.fitness(cur);
    best_improvement_ascent(inst.n(), cur, fcur, [&](std::uint32_t t) -> std::optional<double> {
        ++evals;
        return inst.fitness(t);
    });
    return {Genotype(cur, inst.n()), fcur, evals};
}

BasinPartition basin_partition(const NkInstance& inst) {
    const auto table = fitness_table(inst);
    return basin_partition(inst, table);
}

BasinPartition basin_partition(const NkInstance& inst, std::span<const double> fitness) {
    const int n = inst.n();
    const std::uint32_t size = 1U << n;
    if (fitness.size() != size) throw ParameterError("fitness table size must be 2^n");

    // One ascent step per genotype; a genotype pointing at itself is a local optimum.
    std::vector<std::uint32_t> next(size);
    for (std::uint32_t s = 0; s < size; ++s) {
        std::uint32_t best = s;
        double best_f = fitness[s];
        for (int i = 0; i < n; ++i) {
            const std::uint32_t t = s ^ (1U << i);
            if (fitness[t] > best_f) {
                best = t;
                best_f = fitness[t];
            }
        }
        next[s] = best;
    }
    // The strict '>' scan above keeps the lowest locus among equal best
    // neighbours and refuses moves that do not strictly improve, which is the
    // same rule as best_improvement_ascent.

    constexpr std::uint32_t kUnknown = ~std::uint32_t{0};
    std::vector<std::uint32_t> endpoint(size, kUnknown);
    std::vector<std::uint32_t> path;
    for (std::uint32_t s = 0; s < size; ++s) {
        if (endpoint[s] != kUnknown) continue;
        path.clear();
        std::uint32_t cur = s;
        while (endpoint[cur] == kUnknown && next[cur] != cur) {
            path.push_back(cur);
            cur = next[cur];
        }
        const std::uint32_t lo = endpoint[cur] == kUnknown ? cur : endpoint[cur];
        endpoint[cur] = lo;
        for (std::uint32_t v : path) endpoint[v] = lo;
    }

    std::vector<std::uint32_t> lo_genotypes;
    for (std::uint32_t s = 0; s < size; ++s) {
        if (next[s] == s) lo_genotypes.push_back(s);
    }
    std::sort(lo_genotypes.begin(), lo_genotypes.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
        return a < b;
    });
    for (std::size_t i = 1; i < lo_genotypes.size(); ++i) {
        if (fitness[lo_genotypes[i - 1]] == fitness[lo_genotypes[i]]) {
            throw NeutralityError(Genotype(lo_genotypes[i - 1], n), Genotype(lo_genotypes[i], n));
        }
    }

    std::vector<std::uint32_t> rank(size, 0);
    BasinPartition out;
    out.n = n;
    out.optima.reserve(lo_genotypes.size());
    for (std::size_t r = 0; r < lo_genotypes.size(); ++r) {
        rank[lo_genotypes[r]] = static_cast<std::uint32_t>(r);
        out.optima.push_back({Genotype(lo_genotypes[r], n), fitness[lo_genotypes[r]], 0});
    }
    out.assignment.resize(size);
    for (std::uint32_t s = 0; s < size; ++s) {
        const std::uint32_t r = rank[endpoint[s]];
        out.assignment[s] = r;
        ++out.optima[r].basin_size;
    }
    return out;
}

const LocalOptimum& global_optimum(const BasinPartition& p) {
    if (p.optima.empty()) throw ParameterError("empty basin partition");
    return p.optima.front();
}

void write_assignment(const BasinPartition& p, std::ostream& out) {
    out << "genotype_index,lo_index\n";
    for (std::size_t s = 0; s < p.assignment.size(); ++s) out << s << ',' << p.assignment[s] << '\n';
}

void write_optima(const BasinPartition& p, std::ostream& out) {
    out << "lo_index,genotype_index,fitness,basin_size\n";
    char buf[32];
    for (std::size_t i = 0; i < p.optima.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p.optima[i].fitness);
        out << i << ',' << p.optima[i].genotype.index() << ',' << buf << ',' << p.optima[i].basin_size << '\n';
    }
}

}  // namespace lonkit
