#include "lonkit/lon_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "lonkit/parallel.hpp"
#include "lonkit/perf_stats.hpp"

namespace lonkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CostGraph {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> targets;
    std::vector<double> costs;
};

// Off-diagonal arcs with cost 1 / normalised weight, optionally reversed.
CostGraph cost_graph(const Lon& lon, bool reversed) {
    const std::size_t nv = lon.node_count();
    CostGraph g;
    g.offsets.assign(nv + 1, 0);
    for (std::size_t i = 0; i < nv; ++i) {
        for (const auto& a : lon.out_arcs(i)) ++g.offsets[(reversed ? a.target : i) + 1];
    }
    for (std::size_t i = 0; i < nv; ++i) g.offsets[i + 1] += g.offsets[i];
    g.targets.resize(g.offsets[nv]);
    g.costs.resize(g.offsets[nv]);
    std::vector<std::size_t> fill(g.offsets.begin(), g.offsets.end() - 1);
    for (std::size_t i = 0; i < nv; ++i) {
        for (const auto& a : lon.out_arcs(i)) {
            const std::size_t from = reversed ? a.target : i;
            const std::size_t slot = fill[from]++;
            g.targets[slot] = reversed ? static_cast<std::uint32_t>(i) : a.target;
            g.costs[slot] = 1.0 / a.weight;
        }
    }
    return g;
}

void dijkstra(const CostGraph& g, std::uint32_t source, std::vector<double>& dist) {
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::fill(dist.begin(), dist.end(), kInf);
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[u]) continue;
        for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            const double alt = du + g.costs[e];
            const std::uint32_t v = g.targets[e];
            if (alt < dist[v]) {
                dist[v] = alt;
                heap.emplace(alt, v);
            }
        }
    }
}

// Undirected simple graph: an edge wherever an arc exists in either
// direction, self-loops dropped. Neighbour lists are sorted.
std::vector<std::vector<std::uint32_t>> undirected_projection(const Lon& lon) {
    const std::size_t nv = lon.node_count();
    std::vector<std::vector<std::uint32_t>> adj(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        for (const auto& a : lon.out_arcs(i)) {
            adj[i].push_back(a.target);
            adj[a.target].push_back(static_cast<std::uint32_t>(i));
        }
    }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

}  // namespace

PathLength shortest_paths_to_go(const Lon& lon) {
    PathLength out;
    const std::size_t nv = lon.node_count();
    if (nv == 0) throw ParameterError("empty network");
    if (nv == 1) {
        out.normalized = 0.0;
        out.count = 0.0;
        return out;
    }
    const auto g = cost_graph(lon, /*reversed=*/true);
    std::vector<double> dist(nv);
    dijkstra(g, lon.go_index(), dist);
    double total = 0.0;
    std::size_t reached = 0;
    for (std::size_t i = 0; i < nv; ++i) {
        if (i == lon.go_index()) continue;
        if (dist[i] == kInf) {
            ++out.unreachable;
        } else {
            total += dist[i];
            ++reached;
        }
    }
    if (reached > 0) {
        out.normalized = total / static_cast<double>(reached);
        out.count = *out.normalized / static_cast<double>(lon.ball());
    }
    return out;
}

PathLength char_path_length(const Lon& lon, unsigned workers) {
    PathLength out;
    const std::size_t nv = lon.node_count();
    if (nv < 2) return out;
    const auto g = cost_graph(lon, /*reversed=*/false);
    std::vector<double> sums(nv, 0.0);
    std::vector<std::size_t> reached(nv, 0);
    parallel_for(nv, workers, [&](std::size_t src) {
        thread_local std::vector<double> dist;
        dist.resize(nv);
        dijkstra(g, static_cast<std::uint32_t>(src), dist);
        double s = 0.0;
        std::size_t r = 0;
        for (std::size_t j = 0; j < nv; ++j) {
            if (j != src && dist[j] != kInf) {
                s += dist[j];
                ++r;
            }
        }
        sums[src] = s;
        reached[src] = r;
    });
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < nv; ++i) {
        total += sums[i];
        pairs += reached[i];
    }
    out.unreachable = nv * (nv - 1) - pairs;
    if (pairs > 0) {
        out.normalized = total / static_cast<double>(pairs);
        out.count = *out.normalized / static_cast<double>(lon.ball());
    }
    return out;
}

std::optional<double> fitness_fitness_corr(const Lon& lon) {
    std::vector<double> own, neigh;
    for (std::size_t i = 0; i < lon.node_count(); ++i) {
        double wsum = 0.0, fsum = 0.0;
        for (const auto& a : lon.out_arcs(i)) {
            wsum += static_cast<double>(a.count);
            fsum += static_cast<double>(a.count) * lon.fitness(a.target);
        }
        if (wsum == 0.0) continue;
        own.push_back(lon.fitness(i));
        neigh.push_back(fsum / wsum);
    }
    const auto rho = spearman(own, neigh);
    if (!rho) return std::nullopt;
    return rho->r;
}

double avg_self_weight(const Lon& lon) {
    if (lon.node_count() == 0) throw ParameterError("empty network");
    double total = 0.0;
    for (std::size_t i = 0; i < lon.node_count(); ++i) total += static_cast<double>(lon.self_count(i));
    return total / static_cast<double>(lon.node_count());
}

std::optional<double> clustering_coeff(const Lon& lon) {
    const auto adj = undirected_projection(lon);
    const std::size_t nv = adj.size();
    std::vector<char> mark(nv, 0);
    std::uint64_t triangles = 0;
    double triples = 0.0;
    for (std::size_t u = 0; u < nv; ++u) {
        const double deg = static_cast<double>(adj[u].size());
        triples += deg * (deg - 1.0) / 2.0;
        for (auto w : adj[u]) mark[w] = 1;
        for (auto v : adj[u]) {
            if (v <= u) continue;
            for (auto w : adj[v]) {
                if (w > v && mark[w]) ++triangles;
            }
        }
        for (auto w : adj[u]) mark[w] = 0;
    }
    if (triples == 0.0) return std::nullopt;
    return 3.0 * static_cast<double>(triangles) / triples;
}

double avg_out_degree(const Lon& lon) {
    if (lon.node_count() == 0) throw ParameterError("empty network");
    return static_cast<double>(lon.arc_count()) / static_cast<double>(lon.node_count());
}

std::optional<double> node_disparity(const Lon& lon, std::size_t i) {
    double strength = 0.0;
    for (const auto& a : lon.out_arcs(i)) strength += static_cast<double>(a.count);
    if (strength == 0.0) return std::nullopt;
    double y2 = 0.0;
    for (const auto& a : lon.out_arcs(i)) {
        const double q = static_cast<double>(a.count) / strength;
        y2 += q * q;
    }
    return y2;
}

std::optional<double> avg_disparity(const Lon& lon) {
    double total = 0.0;
    std::size_t qualifying = 0;
    for (std::size_t i = 0; i < lon.node_count(); ++i) {
        if (const auto y = node_disparity(lon, i)) {
            total += *y;
            ++qualifying;
        }
    }
    if (qualifying == 0) return std::nullopt;
    return total / static_cast<double>(qualifying);
}

std::optional<double> degree_assortativity(const Lon& lon) {
    const auto adj = undirected_projection(lon);
    // Each undirected edge contributes both orientations, so the two
    // endpoint-degree marginals coincide.
    double m = 0.0, sx = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t u = 0; u < adj.size(); ++u) {
        const double du = static_cast<double>(adj[u].size());
        for (auto v : adj[u]) {
            const double dv = static_cast<double>(adj[v].size());
            m += 1.0;
            sx += du;
            sxx += du * du;
            sxy += du * dv;
        }
    }
    if (m < 4.0) return std::nullopt;  // fewer than 2 undirected edges
    const double mean = sx / m;
    const double var = sxx / m - mean * mean;
    if (!(var > 1e-12 * std::max(1.0, mean * mean))) return std::nullopt;
    return std::clamp((sxy / m - mean * mean) / var, -1.0, 1.0);
}

LonMetricsRow metrics_row(const Lon& lon, const MetricsOptions& opts) {
    LonMetricsRow row;
    row.id = lon.id();
    row.nv = lon.node_count();
    const auto go = shortest_paths_to_go(lon);
    row.lo = go.normalized;
    row.lo_count = go.count;
    row.go_unreachable = go.unreachable;
    if (opts.path_length) {
        const auto lv = char_path_length(lon, opts.workers);
        row.lv = lv.normalized;
        row.lv_count = lv.count;
    }
    row.fnn = fitness_fitness_corr(lon);
    row.wii = avg_self_weight(lon);
    row.cc = clustering_coeff(lon);
    row.zout = avg_out_degree(lon);
    row.y2 = avg_disparity(lon);
    row.knn = degree_assortativity(lon);
    return row;
}

}  // namespace lonkit
