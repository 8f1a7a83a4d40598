#include "lonkit/lon.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace lonkit {

Lon Lon::from_edges(InstanceId id, int d, std::uint64_t ball, std::vector<Node> nodes,
                    std::vector<Edge> edges) {
    if (ball == 0) throw ParameterError("ball size must be positive");
    Lon lon;
    lon.id_ = id;
    lon.d_ = d;
    lon.ball_ = ball;
    const std::size_t nv = nodes.size();
    for (const auto& node : nodes) {
        lon.genotype_.push_back(node.genotype);
        lon.fitness_.push_back(node.fitness);
        lon.basin_size_.push_back(node.basin_size);
    }
    lon.self_count_.assign(nv, 0);
    lon.self_weight_.assign(nv, 0.0);

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    const auto norm = static_cast<double>(ball);
    lon.offsets_.assign(nv + 1, 0);
    for (std::size_t e = 0; e < edges.size();) {
        const Edge head = edges[e];
        if (head.from >= nv || head.to >= nv) throw ParameterError("edge endpoint out of range");
        std::uint64_t count = 0;
        for (; e < edges.size() && edges[e].from == head.from && edges[e].to == head.to; ++e) {
            count += edges[e].count;
        }
        if (count == 0) continue;
        if (head.from == head.to) {
            lon.self_count_[head.from] = count;
            lon.self_weight_[head.from] = static_cast<double>(count) / norm;
        } else {
            lon.arcs_.push_back({head.to, count, static_cast<double>(count) / norm});
            ++lon.offsets_[head.from + 1];
        }
    }
    for (std::size_t i = 0; i < nv; ++i) lon.offsets_[i + 1] += lon.offsets_[i];
    return lon;
}

Lon extract_lon(const NkInstance& inst, const BasinPartition& p, int d) {
    const int n = inst.n();
    if (p.n != n) throw ParameterError("partition does not belong to this instance");
    if (d < 1 || d > n) throw ParameterError("distance threshold must lie in [1, n]");

    std::vector<std::uint32_t> masks;
    for (const auto& g : hamming_ball(Genotype(0, n), d)) masks.push_back(g.index());

    std::vector<Lon::Node> nodes;
    nodes.reserve(p.size());
    for (const auto& lo : p.optima) nodes.push_back({lo.genotype.index(), lo.fitness, lo.basin_size});

    std::vector<Lon::Edge> edges;
    std::vector<std::uint32_t> targets(masks.size());
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        const std::uint32_t origin = p.optima[i].genotype.index();
        for (std::size_t m = 0; m < masks.size(); ++m) targets[m] = p.assignment[origin ^ masks[m]];
        std::sort(targets.begin(), targets.end());
        for (std::size_t m = 0; m < targets.size();) {
            std::size_t run = m;
            while (run < targets.size() && targets[run] == targets[m]) ++run;
            edges.push_back({i, targets[m], run - m});
            m = run;
        }
    }
    return Lon::from_edges(inst.id(), d, masks.size(), std::move(nodes), std::move(edges));
}

namespace {

std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

template <typename T>
T to_int(const std::string& s, int line) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad integer '" + s + "'", line);
    return v;
}

double to_real(const std::string& s, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad number '" + s + "'", line);
    return v;
}

}  // namespace

void write_lon(const Lon& lon, std::ostream& out) {
    const auto id = lon.id();
    out << "lon 1\n";
    out << "n " << id.n << " k " << id.k << " seed " << id.seed << " d " << lon.d() << " nv "
        << lon.node_count() << " ball " << lon.ball() << "\n";
    out << "nodes\n";
    for (std::size_t i = 0; i < lon.node_count(); ++i) {
        out << i << ' ' << Genotype(lon.genotype(i), id.n).to_string() << ' '
            << fmt_real(lon.fitness(i)) << ' ' << lon.basin_size(i) << '\n';
    }
    out << "arcs\n";
    for (std::size_t i = 0; i < lon.node_count(); ++i) {
        bool self_written = lon.self_count(i) == 0;
        for (const auto& a : lon.out_arcs(i)) {
            if (!self_written && a.target > i) {
                out << i << ' ' << i << ' ' << lon.self_count(i) << ' ' << fmt_real(lon.self_weight(i)) << '\n';
                self_written = true;
            }
            out << i << ' ' << a.target << ' ' << a.count << ' ' << fmt_real(a.weight) << '\n';
        }
        if (!self_written) {
            out << i << ' ' << i << ' ' << lon.self_count(i) << ' ' << fmt_real(lon.self_weight(i)) << '\n';
        }
    }
    out << "end\n";
}

Lon read_lon(std::istream& in) {
    int lineno = 0;
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(std::string("unexpected end of file, expected ") + what, lineno + 1);
        ++lineno;
        return split(line);
    };

    if (next("header") != std::vector<std::string>{"lon", "1"}) throw ParseError("not a lon version 1 file", lineno);
    auto head = next("shape line");
    if (head.size() != 12 || head[0] != "n" || head[2] != "k" || head[4] != "seed" || head[6] != "d" ||
        head[8] != "nv" || head[10] != "ball") {
        throw ParseError("expected 'n <n> k <k> seed <seed> d <d> nv <nv> ball <ball>'", lineno);
    }
    InstanceId id{to_int<int>(head[1], lineno), to_int<int>(head[3], lineno),
                  to_int<std::uint64_t>(head[5], lineno)};
    const int d = to_int<int>(head[7], lineno);
    const auto nv = to_int<std::size_t>(head[9], lineno);
    const auto ball = to_int<std::uint64_t>(head[11], lineno);
    if (ball == 0) throw ParseError("ball size must be positive", lineno);

    if (next("'nodes'") != std::vector<std::string>{"nodes"}) throw ParseError("expected 'nodes'", lineno);
    std::vector<Lon::Node> nodes;
    for (std::size_t i = 0; i < nv; ++i) {
        auto row = next("node row");
        if (row.size() != 4) throw ParseError("node row needs 4 fields", lineno);
        if (to_int<std::size_t>(row[0], lineno) != i) throw ParseError("node rows must be numbered in order", lineno);
        if (static_cast<int>(row[1].size()) != id.n) throw ParseError("genotype length differs from n", lineno);
        Genotype g;
        try {
            g = Genotype::from_string(row[1]);
        } catch (const ParameterError& e) {
            throw ParseError(e.what(), lineno);
        }
        nodes.push_back({g.index(), to_real(row[2], lineno), to_int<std::uint64_t>(row[3], lineno)});
    }

    if (next("'arcs'") != std::vector<std::string>{"arcs"}) throw ParseError("expected 'arcs'", lineno);
    std::vector<Lon::Edge> edges;
    std::vector<std::pair<double, int>> weights;
    while (true) {
        auto row = next("arc row or 'end'");
        if (row == std::vector<std::string>{"end"}) break;
        if (row.size() != 4) throw ParseError("arc row needs 4 fields: i j count weight", lineno);
        const auto from = to_int<std::uint32_t>(row[0], lineno);
        const auto to = to_int<std::uint32_t>(row[1], lineno);
        const auto count = to_int<std::uint64_t>(row[2], lineno);
        if (from >= nv || to >= nv) throw ParseError("arc endpoint out of range", lineno);
        if (count == 0) throw ParseError("zero-weight arcs are not stored", lineno);
        if (!edges.empty() && std::tie(edges.back().from, edges.back().to) >= std::tie(from, to)) {
            throw ParseError("arc rows must be sorted and unique", lineno);
        }
        edges.push_back({from, to, count});
        weights.emplace_back(to_real(row[3], lineno), lineno);
    }

    // Stored weights must agree with count / ball.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double expect = static_cast<double>(edges[e].count) / static_cast<double>(ball);
        if (weights[e].first != expect) throw ParseError("normalised weight disagrees with count/ball", weights[e].second);
    }
    return Lon::from_edges(id, d, ball, std::move(nodes), std::move(edges));
}

void write_dot(const Lon& lon, std::ostream& out) {
    out << "digraph \"" << lon.id().label() << "\" {\n";
    for (std::size_t i = 0; i < lon.node_count(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", lon.fitness(i));
        out << "  " << i << " [label=\"" << buf << "\"" << (i == lon.go_index() ? ", shape=doublecircle" : "")
            << "];\n";
    }
    for (std::size_t i = 0; i < lon.node_count(); ++i) {
        for (const auto& a : lon.out_arcs(i)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6g", a.weight);
            out << "  " << i << " -> " << a.target << " [weight=\"" << buf << "\"];\n";
        }
    }
    out << "}\n";
}

}  // namespace lonkit
