#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lonkit {

inline constexpr int kMaxLoci = 30;

/// Raised on invalid landscape parameters or malformed input files.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A binary string of fixed length. Locus i is bit i of the integer index,
/// and character i of the textual form.
class Genotype {
public:
    Genotype() = default;
    Genotype(std::uint32_t index, int length);

    static Genotype from_string(const std::string& bits);

    std::uint32_t index() const { return index_; }
    int length() const { return length_; }
    int bit(int locus) const { return static_cast<int>((index_ >> locus) & 1U); }
    Genotype flipped(int locus) const { return {index_ ^ (1U << locus), length_}; }
    std::string to_string() const;

    friend bool operator==(const Genotype&, const Genotype&) = default;

private:
    std::uint32_t index_ = 0;
    int length_ = 0;
};

int hamming_distance(const Genotype& a, const Genotype& b);

/// Identity of a generated landscape; instances are reproducible from it.
struct InstanceId {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;

    std::string label() const;  // e.g. "n18_k2_s7"
    friend bool operator==(const InstanceId&, const InstanceId&) = default;
    friend auto operator<=>(const InstanceId&, const InstanceId&) = default;
};

/// NK landscape with random epistatic partners.
class NkInstance {
public:
    NkInstance(int n, int k, std::uint64_t seed, std::vector<std::vector<int>> links,
               std::vector<std::vector<double>> tables);

    int n() const { return n_; }
    int k() const { return k_; }
    std::uint64_t seed() const { return seed_; }
    InstanceId id() const { return {n_, k_, seed_}; }

    std::span<const int> links(int locus) const { return links_[locus]; }
    std::span<const double> table(int locus) const { return tables_[locus]; }

    /// Mean of the locus contributions; the table index of locus i has bit 0 =
    /// s_i and bit j = allele of the j-th partner.
    double fitness(std::uint32_t genotype) const;
    double fitness(const Genotype& s) const;

    friend bool operator==(const NkInstance&, const NkInstance&) = default;

private:
    int n_;
    int k_;
    std::uint64_t seed_;
    std::vector<std::vector<int>> links_;
    std::vector<std::vector<double>> tables_;
};

/// Deterministic in (n, k, seed). Links are drawn for loci 0..n-1 in order by
/// a partial Fisher-Yates shuffle of the other loci, then all tables are filled
/// locus by locus, entry by entry, from the same mt19937_64 stream.
NkInstance generate_instance(int n, int k, std::uint64_t seed);

/// The n one-bit-flip neighbours, ordered by flipped locus.
std::vector<Genotype> neighbors(const Genotype& s);

/// Every genotype within Hamming distance d of s (s included), ordered by
/// distance and then lexicographically by flipped loci.
std::vector<Genotype> hamming_ball(const Genotype& s, int d);

/// Size of a radius-d Hamming ball in n dimensions.
std::uint64_t ball_size(int n, int d);

/// Fitness of all 2^n genotypes, indexed by genotype index.
std::vector<double> fitness_table(const NkInstance& inst);

void write_instance(const NkInstance& inst, std::ostream& out);
NkInstance read_instance(std::istream& in);

}  // namespace lonkit
