#include "lonkit/perf_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lonkit/distributions.hpp"

namespace lonkit {

SuccessStats summarize_runs(std::span<const std::uint64_t> successful_fe, std::uint64_t n_runs,
                            std::uint64_t fe_max) {
    if (successful_fe.size() > n_runs) throw std::invalid_argument("more successes than runs");
    SuccessStats out;
    out.fe_max = fe_max;
    out.n_runs = n_runs;
    out.successes = successful_fe.size();
    if (n_runs > 0) out.ps = static_cast<double>(out.successes) / static_cast<double>(n_runs);
    if (out.successes > 0) {
        double total = 0.0;
        for (auto fe : successful_fe) total += static_cast<double>(fe);
        out.mean_ts = total / static_cast<double>(out.successes);
    }
    return out;
}

double ets(const SuccessStats& stats) {
    if (!(stats.ps > 0.0) || !stats.mean_ts) {
        throw UndefinedPerformance("instance never solved: expected runtime is undefined");
    }
    return (1.0 - stats.ps) / stats.ps * static_cast<double>(stats.fe_max) + *stats.mean_ts;
}

std::vector<double> midranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = mid;
        i = j + 1;
    }
    return ranks;
}

std::optional<Correlation> pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t m = x.size();
    if (m != y.size() || m < 3) return std::nullopt;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(m) - 2.0;
    double p = 0.0;
    if (std::fabs(r) < 1.0) {
        const double t = r * std::sqrt(df / (1.0 - r * r));
        p = dist::student_t_two_sided_p(t, df);
    }
    return Correlation{r, p, m};
}

std::optional<Correlation> spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) return std::nullopt;
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    return pearson(rx, ry);
}

std::vector<CorrelationEntry> correlation_matrix(const std::vector<std::string>& names,
                                                 const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size()) throw std::invalid_argument("one name per column required");
    std::vector<CorrelationEntry> out;
    for (std::size_t a = 0; a < columns.size(); ++a) {
        for (std::size_t b = 0; b < columns.size(); ++b) {
            if (columns[a].size() != columns[b].size()) throw std::invalid_argument("columns differ in length");
            std::vector<double> xa, xb;
            for (std::size_t i = 0; i < columns[a].size(); ++i) {
                if (std::isnan(columns[a][i]) || std::isnan(columns[b][i])) continue;
                xa.push_back(columns[a][i]);
                xb.push_back(columns[b][i]);
            }
            out.push_back({names[a], names[b], pearson(xa, xb), spearman(xa, xb), xa.size()});
        }
    }
    return out;
}

}  // namespace lonkit
