#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <tuple>
#include <vector>

#include "lonkit/basin_hc.hpp"
#include "lonkit/nk_model.hpp"

namespace lonkit {

/// Off-diagonal escape edge. `count` is the number of ball members of the
/// source optimum that climb into the target basin; `weight` is count / ball.
struct LonArc {
    std::uint32_t target = 0;
    std::uint64_t count = 0;
    double weight = 0.0;

    friend bool operator==(const LonArc&, const LonArc&) = default;
};

/// Local optima network with escape edges at distance <= d. Node 0 is the
/// global optimum. Self-loops are kept apart from the arc lists.
class Lon {
public:
    Lon() = default;

    InstanceId id() const { return id_; }
    int d() const { return d_; }
    std::uint64_t ball() const { return ball_; }
    std::size_t node_count() const { return fitness_.size(); }
    std::uint32_t go_index() const { return 0; }

    std::uint32_t genotype(std::size_t i) const { return genotype_[i]; }
    double fitness(std::size_t i) const { return fitness_[i]; }
    std::uint64_t basin_size(std::size_t i) const { return basin_size_[i]; }
    std::uint64_t self_count(std::size_t i) const { return self_count_[i]; }
    double self_weight(std::size_t i) const { return self_weight_[i]; }

    /// Off-diagonal out-arcs of node i, sorted by target.
    std::span<const LonArc> out_arcs(std::size_t i) const {
        return std::span<const LonArc>(arcs_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }
    std::size_t arc_count() const { return arcs_.size(); }

    friend bool operator==(const Lon&, const Lon&) = default;

    struct Node {
        std::uint32_t genotype = 0;
        double fitness = 0.0;
        std::uint64_t basin_size = 0;
    };
    struct Edge {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        std::uint64_t count = 0;
    };

    /// Builds a network from counted edges (self-loops allowed, duplicates
    /// summed, zero counts dropped). Normalised weights are count / ball.
    static Lon from_edges(InstanceId id, int d, std::uint64_t ball, std::vector<Node> nodes,
                          std::vector<Edge> edges);

private:
    friend Lon read_lon(std::istream& in);

    InstanceId id_;
    int d_ = 0;
    std::uint64_t ball_ = 0;
    std::vector<std::uint32_t> genotype_;
    std::vector<double> fitness_;
    std::vector<std::uint64_t> basin_size_;
    std::vector<std::uint64_t> self_count_;
    std::vector<double> self_weight_;
    std::vector<std::size_t> offsets_;
    std::vector<LonArc> arcs_;
};

/// w_ij = #{s : d(s, LO_i) <= d and h(s) = LO_j}; the optimum itself is a
/// member of its own ball.
Lon extract_lon(const NkInstance& inst, const BasinPartition& p, int d = 2);

/// Text format: header, node section, arc section (self-loops as i i rows).
void write_lon(const Lon& lon, std::ostream& out);
Lon read_lon(std::istream& in);

/// Graphviz export; nodes labelled with fitness, arcs with normalised weight.
void write_dot(const Lon& lon, std::ostream& out);

}  // namespace lonkit
