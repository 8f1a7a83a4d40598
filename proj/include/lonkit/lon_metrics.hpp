#pragma once

#include <cstdint>
#include <optional>

#include "lonkit/lon.hpp"

namespace lonkit {

/// Shortest-path summary under arc cost 1/weight. `normalized` uses the
/// transition-probability channel (count / ball), `count` the raw counts;
/// the two differ by the constant factor ball.
struct PathLength {
    std::optional<double> normalized;
    std::optional<double> count;
    std::size_t unreachable = 0;  // sources (or ordered pairs) with no path
};

PathLength shortest_paths_to_go(const Lon& lon);
PathLength char_path_length(const Lon& lon, unsigned workers = 1);

std::optional<double> fitness_fitness_corr(const Lon& lon);
double avg_self_weight(const Lon& lon);
std::optional<double> clustering_coeff(const Lon& lon);
double avg_out_degree(const Lon& lon);
std::optional<double> avg_disparity(const Lon& lon);
std::optional<double> degree_assortativity(const Lon& lon);

/// Y2(i) = sum_j (w_ij / s_i)^2 over off-diagonal arcs; nullopt if i has none.
std::optional<double> node_disparity(const Lon& lon, std::size_t i);

struct LonMetricsRow {
    InstanceId id;
    std::size_t nv = 0;
    std::optional<double> lo;
    std::optional<double> lv;
    std::optional<double> fnn;
    double wii = 0.0;
    std::optional<double> cc;
    double zout = 0.0;
    std::optional<double> y2;
    std::optional<double> knn;
    std::optional<double> lo_count;
    std::optional<double> lv_count;
    std::size_t go_unreachable = 0;
};

struct MetricsOptions {
    bool path_length = true;  // the all-pairs pass dominates run time on large networks
    unsigned workers = 1;
};

LonMetricsRow metrics_row(const Lon& lon, const MetricsOptions& opts = {});

}  // namespace lonkit
