#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace erhawkes {

// Bit-packed N x N Bernoulli(p) influence matrix. theta(i, j) = 1 means j
// influences i; self-loops are allowed. Entries are sampled by a
// counter-based generator indexed by (seed, i, j), so the matrix is a pure
// function of (n, p, seed) and any entry is addressable without generator
// state. Immutable after construction.
class Adjacency {
  public:
    static Adjacency sample(int n, double p, std::uint64_t seed);

    int n() const { return n_; }
    double p() const { return p_; }
    std::uint64_t seed() const { return seed_; }

    bool at(int i, int j) const {
        return (bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1ULL;
    }

    const std::uint64_t* row_words(int i) const {
        return bits_.data() + static_cast<std::size_t>(i) * words_;
    }
    std::size_t words_per_row() const { return words_; }

    std::uint32_t row_sum(int i) const { return row_sums_[i]; }
    std::uint32_t col_sum(int j) const { return col_sums_[j]; }
    const std::vector<std::uint32_t>& row_sums() const { return row_sums_; }
    const std::vector<std::uint32_t>& col_sums() const { return col_sums_; }

    // For each j, the list of processes influenced by j (column j support).
    std::vector<std::vector<std::int32_t>> influence_lists() const;

    bool operator==(const Adjacency& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

  private:
    friend Adjacency read_adjacency_text(const std::string& path, double p);
    Adjacency() = default;
    void rebuild_sums();

    int n_ = 0;
    double p_ = 0.0;
    std::uint64_t seed_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint32_t> row_sums_;
    std::vector<std::uint32_t> col_sums_;
};

struct EventFlags {
    bool omega;   // operator-norm event: Lambda-weighted norms of A_N within a
    bool a_event; // row/col sum concentration within N^(1/4)
};

// Evaluates the norm event via r in {1, inf} plus the interpolation
// inequality, and the concentration event on row/column sums.
// Requires Lambda * adj.p() < 1 and 1 <= K <= n.
EventFlags check_events(const Adjacency& adj, double lambda_mass, int K);

// Text format: first line "N", then N lines of N characters '0'/'1'
// (line i = row i). Loading needs p supplied by the caller since the file
// stores only the bits.
void write_adjacency_text(const Adjacency& adj, const std::string& path);
Adjacency read_adjacency_text(const std::string& path, double p);

} // namespace erhawkes
