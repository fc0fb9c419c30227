#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "seqae/matrix.hpp"
#include "seqae/sequences.hpp"

namespace seqae {

/// Linear-gap Smith-Waterman scoring.
struct ScoringScheme {
    int match = 2;
    int mismatch = -1;
    int gap = -2;

    /// Throws ConfigError unless match > 0, mismatch <= 0, gap <= 0.
    void validate() const;
    bool operator==(const ScoringScheme&) const = default;
};

/// Best local alignment score. Two-row DP, O(min(|a|,|b|)) memory.
std::int64_t sw_score(std::string_view a, std::string_view b, const ScoringScheme& scheme);

/// Score of a sequence against itself. With match > 0 and non-positive
/// mismatch/gap the full diagonal is optimal, so this is |a| * match.
std::int64_t self_score(std::string_view a, const ScoringScheme& scheme);

/// 1 - 2 S(a,b) / (S(a,a) + S(b,b)), in [0, 1].
double sw_distance(std::string_view a, std::string_view b, const ScoringScheme& scheme);

inline double sw_distance(const Sequence& a, const Sequence& b, const ScoringScheme& scheme) {
    return sw_distance(a.residues, b.residues, scheme);
}

/// Row-major single-precision distances in [0, 1].
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// Throws CapacityError when rows * cols floats cannot be held in memory.
    DistanceMatrix(std::size_t rows, std::size_t cols, bool symmetric);
    DistanceMatrix(std::size_t rows, std::size_t cols, bool symmetric, std::vector<float> values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }
    bool symmetric() const noexcept { return symmetric_; }

    float operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    float& operator()(std::size_t i, std::size_t j) { return values_(i, j); }
    std::span<const float> row(std::size_t i) const { return values_.row(i); }

    const std::vector<float>& values() const noexcept { return values_.data(); }

    /// Throws ValidationError unless values lie in [0, 1] and, for a symmetric
    /// matrix, the diagonal is zero and (i,j) == (j,i).
    void validate() const;

    bool operator==(const DistanceMatrix&) const = default;

private:
    Matrix<float> values_;
    bool symmetric_ = false;
};

/// Bytes needed for a rows x cols float matrix. Throws CapacityError when that
/// exceeds `limit_bytes` (default: physical memory) or overflows.
std::uint64_t check_capacity(std::uint64_t rows, std::uint64_t cols, std::uint64_t limit_bytes = 0);

/// Work done by a matrix computation.
struct AlignmentCounters {
    std::uint64_t alignments = 0; ///< sw_score invocations
    std::uint64_t cells = 0;      ///< DP cells evaluated
};

/// Symmetric N x N matrix. Each unordered pair is aligned exactly once; the
/// self-scores come from self_score. Identical output for any thread count.
DistanceMatrix pairwise_matrix(const SequenceSet& set, const ScoringScheme& scheme,
                               unsigned threads = 1, AlignmentCounters* counters = nullptr);

/// N x K matrix of distances from every member of `set` to every member of
/// `refs`. Marked symmetric only when `refs` is the same set as `set`.
DistanceMatrix rect_matrix(const SequenceSet& set, const SequenceSet& refs,
                           const ScoringScheme& scheme, unsigned threads = 1,
                           AlignmentCounters* counters = nullptr);

} // namespace seqae
