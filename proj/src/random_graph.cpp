#include "erhawkes/random_graph.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "erhawkes/errors.hpp"
#include "erhawkes/rng.hpp"

namespace erhawkes {

namespace {

// P(hash < threshold) = p for p in (0, 1); endpoints handled by caller.
std::uint64_t bernoulli_threshold(double p) {
    long double scaled = std::ldexp(static_cast<long double>(p), 64);
    if (scaled >= 18446744073709551615.0L) return ~0ULL;
    return static_cast<std::uint64_t>(scaled);
}

} // namespace

Adjacency Adjacency::sample(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("adjacency: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("adjacency: p must lie in [0, 1]");

    Adjacency adj;
    adj.n_ = n;
    adj.p_ = p;
    adj.seed_ = seed;
    adj.words_ = static_cast<std::size_t>((n + 63) / 64);
    adj.bits_.assign(adj.words_ * static_cast<std::size_t>(n), 0);

    if (p >= 1.0) {
        for (int i = 0; i < n; ++i) {
            std::uint64_t* row = adj.bits_.data() + static_cast<std::size_t>(i) * adj.words_;
            for (int j = 0; j < n; ++j) row[j >> 6] |= 1ULL << (j & 63);
        }
    } else if (p > 0.0) {
        const std::uint64_t thr = bernoulli_threshold(p);
        // Strength-reduced entry_hash(seed, i, j): the pre-finalizer state is
        // affine in j, so each row walks it with one add per entry.
        constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
        constexpr std::uint64_t col_step = golden * 0x100000001b3ULL;
        for (int i = 0; i < n; ++i) {
            std::uint64_t* row = adj.bits_.data() + static_cast<std::size_t>(i) * adj.words_;
            std::uint64_t state = seed + golden * (static_cast<std::uint64_t>(i) + 1) + golden;
            for (std::size_t w = 0; w < adj.words_; ++w) {
                std::uint64_t word = 0;
                const int jmax = std::min(64, n - static_cast<int>(w * 64));
                for (int b = 0; b < jmax; ++b) {
                    std::uint64_t z = state;
                    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
                    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
                    if ((z ^ (z >> 31)) < thr) word |= 1ULL << b;
                    state += col_step;
                }
                row[w] = word;
            }
        }
    }

    adj.rebuild_sums();
    return adj;
}

void Adjacency::rebuild_sums() {
    row_sums_.assign(n_, 0);
    col_sums_.assign(n_, 0);
    for (int i = 0; i < n_; ++i) {
        const std::uint64_t* row = row_words(i);
        std::uint32_t rs = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = row[w];
            rs += static_cast<std::uint32_t>(std::popcount(word));
            while (word) {
                int j = static_cast<int>(w * 64) + std::countr_zero(word);
                ++col_sums_[j];
                word &= word - 1;
            }
        }
        row_sums_[i] = rs;
    }
}

std::vector<std::vector<std::int32_t>> Adjacency::influence_lists() const {
    std::vector<std::vector<std::int32_t>> lists(n_);
    for (int j = 0; j < n_; ++j) lists[j].reserve(col_sums_[j]);
    for (int i = 0; i < n_; ++i) {
        const std::uint64_t* row = row_words(i);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = row[w];
            while (word) {
                int j = static_cast<int>(w * 64) + std::countr_zero(word);
                lists[j].push_back(i);
                word &= word - 1;
            }
        }
    }
    return lists;
}

EventFlags check_events(const Adjacency& adj, double lambda_mass, int K) {
    const int n = adj.n();
    if (K < 1 || K > n) throw std::invalid_argument("check_events: need 1 <= K <= n");
    const double branching = lambda_mass * adj.p();
    if (!(branching < 1.0)) {
        std::ostringstream msg;
        msg << "check_events: Lambda*p = " << branching << " >= 1, threshold a undefined";
        throw SupercriticalModel(msg.str());
    }
    const double a = 0.5 * (1.0 + branching);
    const double dn = static_cast<double>(n);

    std::uint32_t max_row = 0, max_col = 0;
    for (int i = 0; i < n; ++i) max_row = std::max(max_row, adj.row_sum(i));
    for (int j = 0; j < n; ++j) max_col = std::max(max_col, adj.col_sum(j));

    // Partial column sums over the first K rows -> |||I_K A|||_1.
    std::vector<std::uint32_t> colK(n, 0);
    for (int i = 0; i < K; ++i) {
        const std::uint64_t* row = adj.row_words(i);
        for (std::size_t w = 0; w < adj.words_per_row(); ++w) {
            std::uint64_t word = row[w];
            while (word) {
                ++colK[w * 64 + static_cast<std::size_t>(std::countr_zero(word))];
                word &= word - 1;
            }
        }
    }
    std::uint32_t max_colK = 0;
    for (int j = 0; j < n; ++j) max_colK = std::max(max_colK, colK[j]);

    // Partial row sums over the first K columns -> |||A I_K|||_inf.
    std::uint32_t max_rowK = 0;
    const std::size_t full_words = static_cast<std::size_t>(K) / 64;
    const int rem_bits = K % 64;
    const std::uint64_t rem_mask = rem_bits ? ((1ULL << rem_bits) - 1) : 0;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t* row = adj.row_words(i);
        std::uint32_t s = 0;
        for (std::size_t w = 0; w < full_words; ++w)
            s += static_cast<std::uint32_t>(std::popcount(row[w]));
        if (rem_bits) s += static_cast<std::uint32_t>(std::popcount(row[full_words] & rem_mask));
        max_rowK = std::max(max_rowK, s);
    }

    const double ratio = dn / static_cast<double>(K);
    EventFlags flags;
    flags.omega = lambda_mass * max_col / dn <= a && lambda_mass * max_row / dn <= a &&
                  lambda_mass * ratio * max_colK / dn <= a &&
                  lambda_mass * ratio * max_rowK / dn <= a;

    double dev_rows = 0.0, dev_cols = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = adj.row_sum(i) / dn - adj.p();
        dev_rows += d * d;
    }
    for (int j = 0; j < n; ++j) {
        double d = adj.col_sum(j) / dn - adj.p();
        dev_cols += d * d;
    }
    flags.a_event = std::sqrt(dev_rows) + std::sqrt(dev_cols) <= std::pow(dn, 0.25);
    return flags;
}

void write_adjacency_text(const Adjacency& adj, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ConfigError("cannot open for writing: " + tmp);
        out << adj.n() << '\n';
        std::string line(static_cast<std::size_t>(adj.n()), '0');
        for (int i = 0; i < adj.n(); ++i) {
            for (int j = 0; j < adj.n(); ++j) line[j] = adj.at(i, j) ? '1' : '0';
            out << line << '\n';
        }
        if (!out) throw ConfigError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("rename failed: " + path);
}

Adjacency read_adjacency_text(const std::string& path, double p) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    int n = 0;
    if (!(in >> n) || n < 1) throw ConfigError("adjacency file: bad dimension line");
    in.ignore();

    Adjacency adj;
    adj.n_ = n;
    adj.p_ = p;
    adj.seed_ = 0;
    adj.words_ = static_cast<std::size_t>((n + 63) / 64);
    adj.bits_.assign(adj.words_ * static_cast<std::size_t>(n), 0);

    std::string line;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line) || static_cast<int>(line.size()) < n)
            throw ConfigError("adjacency file: row " + std::to_string(i) + " malformed");
        std::uint64_t* row = adj.bits_.data() + static_cast<std::size_t>(i) * adj.words_;
        for (int j = 0; j < n; ++j) {
            if (line[j] == '1')
                row[j >> 6] |= 1ULL << (j & 63);
            else if (line[j] != '0')
                throw ConfigError("adjacency file: row " + std::to_string(i) +
                                  " has a character other than 0/1");
        }
    }
    adj.rebuild_sums();
    return adj;
}

} // namespace erhawkes
