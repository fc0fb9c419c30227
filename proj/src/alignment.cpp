#include "seqae/alignment.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <thread>
#include <unistd.h>

#include "seqae/error.hpp"

namespace seqae {

void ScoringScheme::validate() const {
    if (match <= 0) throw ConfigError("scoring scheme: match must be > 0");
    if (mismatch > 0) throw ConfigError("scoring scheme: mismatch must be <= 0");
    if (gap > 0) throw ConfigError("scoring scheme: gap must be <= 0");
}

std::int64_t sw_score(std::string_view a, std::string_view b, const ScoringScheme& scheme) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t n = b.size();
    if (n == 0) return 0;

    std::vector<std::int64_t> row(n + 1, 0);
    std::int64_t best = 0;
    for (char ca : a) {
        std::int64_t diag = 0;
        std::int64_t left = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::int64_t up = row[j];
            const std::int64_t s = ca == b[j - 1] ? scheme.match : scheme.mismatch;
            std::int64_t h = std::max<std::int64_t>({0, diag + s, up + scheme.gap, left + scheme.gap});
            diag = up;
            row[j] = h;
            left = h;
            best = std::max(best, h);
        }
    }
    return best;
}

std::int64_t self_score(std::string_view a, const ScoringScheme& scheme) {
    return static_cast<std::int64_t>(a.size()) * scheme.match;
}

namespace {

double normalize(std::int64_t ab, std::int64_t aa, std::int64_t bb) {
    const double d = 1.0 - 2.0 * static_cast<double>(ab) / static_cast<double>(aa + bb);
    return std::clamp(d, 0.0, 1.0);
}

std::uint64_t physical_memory_bytes() {
    const long pages = sysconf(_SC_PHYS_PAGES);
    const long page = sysconf(_SC_PAGE_SIZE);
    if (pages <= 0 || page <= 0) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page);
}

// Runs fn(begin, end) over contiguous chunks of [0, total).
template <typename Fn>
void parallel_chunks(std::size_t total, unsigned threads, Fn fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || total < 2) {
        fn(std::size_t{0}, total);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = total * w / workers;
        const std::size_t end = total * (w + 1) / workers;
        pool.emplace_back([=, &fn] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

std::string capacity_message(std::uint64_t rows, std::uint64_t cols, std::uint64_t bytes) {
    return "distance matrix of " + std::to_string(rows) + " x " + std::to_string(cols) +
           " requires " + std::to_string(bytes) + " bytes";
}

} // namespace

double sw_distance(std::string_view a, std::string_view b, const ScoringScheme& scheme) {
    return normalize(sw_score(a, b, scheme), self_score(a, scheme), self_score(b, scheme));
}

std::uint64_t check_capacity(std::uint64_t rows, std::uint64_t cols, std::uint64_t limit_bytes) {
    if (limit_bytes == 0) limit_bytes = physical_memory_bytes();
    constexpr auto max = std::numeric_limits<std::uint64_t>::max();
    if (cols != 0 && rows > max / cols / sizeof(float))
        throw CapacityError(capacity_message(rows, cols, max) + " (overflow)", max);
    const std::uint64_t bytes = rows * cols * sizeof(float);
    if (bytes > limit_bytes)
        throw CapacityError(capacity_message(rows, cols, bytes) + ", more than the " +
                                std::to_string(limit_bytes) + " available",
                            bytes);
    return bytes;
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols, bool symmetric)
    : symmetric_(symmetric) {
    const auto bytes = check_capacity(rows, cols);
    try {
        values_ = Matrix<float>(rows, cols, 0.0f);
    } catch (const std::bad_alloc&) {
        throw CapacityError(capacity_message(rows, cols, bytes) + " (allocation failed)", bytes);
    }
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols, bool symmetric,
                               std::vector<float> values)
    : symmetric_(symmetric) {
    if (values.size() != rows * cols)
        throw DimensionError("distance matrix value count does not match its shape");
    values_ = Matrix<float>(rows, cols, std::move(values));
}

void DistanceMatrix::validate() const {
    for (float v : values_.data())
        if (!(v >= 0.0f && v <= 1.0f))
            throw ValidationError("distance matrix value outside [0, 1]");
    if (!symmetric_) return;
    if (rows() != cols()) throw ValidationError("symmetric distance matrix must be square");
    for (std::size_t i = 0; i < rows(); ++i) {
        if (values_(i, i) != 0.0f) throw ValidationError("symmetric distance matrix has nonzero diagonal");
        for (std::size_t j = 0; j < i; ++j)
            if (values_(i, j) != values_(j, i))
                throw ValidationError("distance matrix is not symmetric at (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
    }
}

DistanceMatrix pairwise_matrix(const SequenceSet& set, const ScoringScheme& scheme,
                               unsigned threads, AlignmentCounters* counters) {
    if (set.empty()) throw ArgumentError("pairwise_matrix: empty sequence set");
    scheme.validate();
    const std::size_t n = set.size();
    DistanceMatrix out(n, n, true);

    std::vector<std::int64_t> self(n);
    for (std::size_t i = 0; i < n; ++i) self[i] = self_score(set[i].residues, scheme);

    // Upper-triangle pairs (i < j), enumerated row by row.
    const std::size_t total = n * (n - 1) / 2;
    std::vector<std::size_t> row_start(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + (n - 1 - i);

    parallel_chunks(total, threads, [&](std::size_t begin, std::size_t end) {
        auto i = static_cast<std::size_t>(
            std::upper_bound(row_start.begin(), row_start.end(), begin) - row_start.begin() - 1);
        for (std::size_t t = begin; t < end; ++t) {
            while (t >= row_start[i + 1]) ++i;
            const std::size_t j = i + 1 + (t - row_start[i]);
            const auto d = static_cast<float>(
                normalize(sw_score(set[i].residues, set[j].residues, scheme), self[i], self[j]));
            out(i, j) = d;
            out(j, i) = d;
        }
    });

    if (counters) {
        // sum over i < j of |a_i| |a_j|
        std::uint64_t sum = 0, sum_sq = 0;
        for (const auto& s : set) {
            sum += s.residues.size();
            sum_sq += static_cast<std::uint64_t>(s.residues.size()) * s.residues.size();
        }
        counters->alignments += total;
        counters->cells += (sum * sum - sum_sq) / 2;
    }
    return out;
}

DistanceMatrix rect_matrix(const SequenceSet& set, const SequenceSet& refs,
                           const ScoringScheme& scheme, unsigned threads,
                           AlignmentCounters* counters) {
    if (set.empty() || refs.empty()) throw ArgumentError("rect_matrix: empty sequence set");
    scheme.validate();
    const std::size_t n = set.size();
    const std::size_t k = refs.size();
    const bool symmetric = &set == &refs || set == refs;
    DistanceMatrix out(n, k, symmetric);

    std::vector<std::int64_t> ref_self(k);
    for (std::size_t j = 0; j < k; ++j) ref_self[j] = self_score(refs[j].residues, scheme);

    const std::size_t total = n * k;
    parallel_chunks(total, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const std::size_t i = t / k;
            const std::size_t j = t % k;
            const auto& a = set[i].residues;
            const auto& b = refs[j].residues;
            out(i, j) = static_cast<float>(
                normalize(sw_score(a, b, scheme), self_score(a, scheme), ref_self[j]));
        }
    });
    if (counters) {
        counters->alignments += total;
        std::uint64_t ref_len = 0;
        for (const auto& r : refs) ref_len += r.residues.size();
        for (const auto& s : set) counters->cells += s.residues.size() * ref_len;
    }
    return out;
}

} // namespace seqae
