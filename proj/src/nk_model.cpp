#include "lonkit/nk_model.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lonkit/rng.hpp"

namespace lonkit {

Genotype::Genotype(std::uint32_t index, int length) : index_(index), length_(length) {
    if (length < 0 || length > kMaxLoci) {
        throw ParameterError("genotype length out of range: " + std::to_string(length));
    }
    if (length < 32 && (index >> length) != 0) {
        throw ParameterError("genotype index has bits beyond its length");
    }
}

Genotype Genotype::from_string(const std::string& bits) {
    if (bits.size() > static_cast<std::size_t>(kMaxLoci)) {
        throw ParameterError("genotype string too long");
    }
    std::uint32_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            index |= 1U << i;
        } else if (bits[i] != '0') {
            throw ParameterError("genotype string must be binary: " + bits);
        }
    }
    return {index, static_cast<int>(bits.size())};
}

std::string Genotype::to_string() const {
    std::string out(static_cast<std::size_t>(length_), '0');
    for (int i = 0; i < length_; ++i) {
        if (bit(i)) out[static_cast<std::size_t>(i)] = '1';
    }
    return out;
}

int hamming_distance(const Genotype& a, const Genotype& b) {
    return std::popcount(a.index() ^ b.index());
}

std::string InstanceId::label() const {
    return "n" + std::to_string(n) + "_k" + std::to_string(k) + "_s" + std::to_string(seed);
}

namespace {

void check_shape(int n, int k) {
    if (n < 1 || n > kMaxLoci) {
        throw ParameterError("n must lie in [1, " + std::to_string(kMaxLoci) +
                             "], got " + std::to_string(n));
    }
    if (k < 0 || k > n - 1) {
        throw ParameterError("k must lie in [0, n-1], got k=" + std::to_string(k) +
                             " for n=" + std::to_string(n));
    }
}

}  // namespace

NkInstance::NkInstance(int n, int k, std::uint64_t seed, std::vector<std::vector<int>> links,
                       std::vector<std::vector<double>> tables)
    : n_(n), k_(k), seed_(seed), links_(std::move(links)), tables_(std::move(tables)) {
    check_shape(n, k);
    if (links_.size() != static_cast<std::size_t>(n) || tables_.size() != links_.size()) {
        throw ParameterError("link/table count must equal n");
    }
    const std::size_t table_len = std::size_t{1} << (k + 1);
    for (int i = 0; i < n; ++i) {
        const auto& li = links_[static_cast<std::size_t>(i)];
        if (li.size() != static_cast<std::size_t>(k)) {
            throw ParameterError("locus " + std::to_string(i) + " must have exactly k partners");
        }
        for (std::size_t j = 0; j < li.size(); ++j) {
            if (li[j] < 0 || li[j] >= n || li[j] == i || (j > 0 && li[j - 1] >= li[j])) {
                throw ParameterError("locus " + std::to_string(i) +
                                     " partners must be sorted, distinct, in range and != i");
            }
        }
        const auto& ti = tables_[static_cast<std::size_t>(i)];
        if (ti.size() != table_len) {
            throw ParameterError("locus " + std::to_string(i) + " table must have 2^(k+1) entries");
        }
        for (double v : ti) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ParameterError("contribution outside [0,1] at locus " + std::to_string(i));
            }
        }
    }
}

double NkInstance::fitness(std::uint32_t genotype) const {
    double sum = 0.0;
    for (int i = 0; i < n_; ++i) {
        const auto& li = links_[static_cast<std::size_t>(i)];
        std::uint32_t pattern = (genotype >> i) & 1U;
        for (std::size_t j = 0; j < li.size(); ++j) {
            pattern |= ((genotype >> li[j]) & 1U) << (j + 1);
        }
        sum += tables_[static_cast<std::size_t>(i)][pattern];
    }
    return sum / n_;
}

double NkInstance::fitness(const Genotype& s) const {
    if (s.length() != n_) throw ParameterError("genotype length differs from instance n");
    return fitness(s.index());
}

NkInstance generate_instance(int n, int k, std::uint64_t seed) {
    check_shape(n, k);
    Engine eng(seed);

    std::vector<std::vector<int>> links(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> pool;
        pool.reserve(static_cast<std::size_t>(n - 1));
        for (int j = 0; j < n; ++j) {
            if (j != i) pool.push_back(j);
        }
        for (int j = 0; j < k; ++j) {
            const auto remaining = static_cast<std::uint64_t>(pool.size() - static_cast<std::size_t>(j));
            const auto pick = static_cast<std::size_t>(j) + uniform_below(eng, remaining);
            std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
        }
        pool.resize(static_cast<std::size_t>(k));
        std::sort(pool.begin(), pool.end());
        links[static_cast<std::size_t>(i)] = std::move(pool);
    }

    std::vector<std::vector<double>> tables(static_cast<std::size_t>(n));
    const std::size_t table_len = std::size_t{1} << (k + 1);
    for (auto& t : tables) {
        t.resize(table_len);
        for (auto& v : t) v = unit_double(eng);
    }
    return {n, k, seed, std::move(links), std::move(tables)};
}

std::vector<Genotype> neighbors(const Genotype& s) {
    std::vector<Genotype> out;
    out.reserve(static_cast<std::size_t>(s.length()));
    for (int i = 0; i < s.length(); ++i) out.push_back(s.flipped(i));
    return out;
}

std::uint64_t ball_size(int n, int d) {
    std::uint64_t total = 0;
    std::uint64_t binom = 1;
    for (int r = 0; r <= d && r <= n; ++r) {
        total += binom;
        binom = binom * static_cast<std::uint64_t>(n - r) / static_cast<std::uint64_t>(r + 1);
    }
    return total;
}

std::vector<Genotype> hamming_ball(const Genotype& s, int d) {
    const int n = s.length();
    if (d < 0 || d > n) throw ParameterError("ball radius must lie in [0, n]");
    std::vector<Genotype> out;
    out.reserve(static_cast<std::size_t>(ball_size(n, d)));
    out.push_back(s);
    std::vector<int> combo;
    for (int r = 1; r <= d; ++r) {
        combo.resize(static_cast<std::size_t>(r));
        std::iota(combo.begin(), combo.end(), 0);
        while (true) {
            std::uint32_t mask = 0;
            for (int c : combo) mask |= 1U << c;
            out.emplace_back(s.index() ^ mask, n);
            // next r-combination of {0..n-1} in lexicographic order
            int pos = r - 1;
            while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
            if (pos < 0) break;
            ++combo[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < r; ++q) {
                combo[static_cast<std::size_t>(q)] = combo[static_cast<std::size_t>(q - 1)] + 1;
            }
        }
    }
    return out;
}

std::vector<double> fitness_table(const NkInstance& inst) {
    const std::size_t size = std::size_t{1} << inst.n();
    std::vector<double> out(size);
    for (std::size_t s = 0; s < size; ++s) out[s] = inst.fitness(static_cast<std::uint32_t>(s));
    return out;
}

// Format:
//   nk-instance 1
//   n <n> k <k> seed <seed>
//   links <i>: <p1> <p2> ...          (n lines)
//   table <i>: <v0> <v1> ...          (n lines, %.17g)
void write_instance(const NkInstance& inst, std::ostream& out) {
    out << "nk-instance 1\n";
    out << "n " << inst.n() << " k " << inst.k() << " seed " << inst.seed() << "\n";
    for (int i = 0; i < inst.n(); ++i) {
        out << "links " << i << ":";
        for (int p : inst.links(i)) out << ' ' << p;
        out << '\n';
    }
    char buf[32];
    for (int i = 0; i < inst.n(); ++i) {
        out << "table " << i << ":";
        for (double v : inst.table(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

namespace {

struct LineReader {
    std::istream& in;
    int number = 0;

    std::string next(const char* expected) {
        std::string line;
        if (!std::getline(in, line)) {
            throw ParseError(std::string("unexpected end of file, expected ") + expected, number + 1);
        }
        ++number;
        return line;
    }
};

template <typename T>
T parse_number(const std::string& token, int line) {
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        char* end = nullptr;
        value = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') throw ParseError("bad number '" + token + "'", line);
    } else {
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            throw ParseError("bad integer '" + token + "'", line);
        }
    }
    return value;
}

template <typename T>
std::vector<T> parse_row(const std::string& line, const std::string& tag, int index, int lineno) {
    std::istringstream ss(line);
    std::string word;
    std::string label;
    ss >> word >> label;
    if (word != tag || label != std::to_string(index) + ":") {
        throw ParseError("expected '" + tag + " " + std::to_string(index) + ":'", lineno);
    }
    std::vector<T> values;
    std::string token;
    while (ss >> token) values.push_back(parse_number<T>(token, lineno));
    return values;
}

}  // namespace

NkInstance read_instance(std::istream& in) {
    LineReader reader{in};
    if (reader.next("header") != "nk-instance 1") {
        throw ParseError("not an nk-instance version 1 file", reader.number);
    }
    std::istringstream head(reader.next("shape line"));
    std::string tn, tk, ts, vn, vk, vs;
    if (!(head >> tn >> vn >> tk >> vk >> ts >> vs) || tn != "n" || tk != "k" || ts != "seed") {
        throw ParseError("expected 'n <n> k <k> seed <seed>'", reader.number);
    }
    const int n = parse_number<int>(vn, reader.number);
    const int k = parse_number<int>(vk, reader.number);
    const auto seed = parse_number<std::uint64_t>(vs, reader.number);
    if (n < 1 || n > kMaxLoci) throw ParseError("n out of range", reader.number);

    std::vector<std::vector<int>> links;
    for (int i = 0; i < n; ++i) {
        auto line = reader.next("links row");
        links.push_back(parse_row<int>(line, "links", i, reader.number));
    }
    std::vector<std::vector<double>> tables;
    for (int i = 0; i < n; ++i) {
        auto line = reader.next("table row");
        tables.push_back(parse_row<double>(line, "table", i, reader.number));
    }
    try {
        return {n, k, seed, std::move(links), std::move(tables)};
    } catch (const ParameterError& e) {
        throw ParseError(e.what(), reader.number);
    }
}

}  // namespace lonkit
