#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqae/alignment.hpp"
#include "seqae/autoencoder.hpp"
#include "seqae/matrix.hpp"

namespace seqae {

struct ClusterLabels {
    std::vector<std::string> ids;
    std::vector<int> labels;
    std::size_t k = 0;

    /// Throws ValidationError unless every label lies in [0, k).
    void validate() const;
    bool operator==(const ClusterLabels&) const = default;
};

using Centroids = Matrix<double>;  ///< k x d

struct KMeansOptions {
    std::size_t k = 2;
    std::size_t max_iter = 300;
    double tol = 1e-6;
    std::uint64_t rng_seed = 0;             ///< k-means++ seeding
    std::optional<Centroids> initial;       ///< fixed initial centers
};

struct KMeansResult {
    ClusterLabels labels;
    Centroids centroids;
    std::size_t iterations = 0;
    /// Sum of squared distances to the assigned center after each assignment step.
    std::vector<double> objective;
};

/// Lloyd iterations from k-means++ seeding or the given centers. A cluster
/// that becomes empty is re-seeded at the point farthest from its assigned
/// center, so k is preserved.
KMeansResult kmeans(const Embedding& emb, const KMeansOptions& opts);

struct Silhouette {
    double mean = 0.0;
    std::vector<double> per_point;
};

/// Euclidean silhouette. s(i) = 0 for members of singleton clusters and
/// where a(i) = b(i) = 0. Empty clusters are skipped; fewer than two nonempty
/// clusters is an ArgumentError.
Silhouette silhouette(const Embedding& emb, const ClusterLabels& labels);

struct HeatmapGrid {
    std::size_t bins = 0;
    std::vector<std::uint64_t> counts;  ///< bins x bins, row = input-distance bin
    std::uint64_t pairs = 0;
    double pearson = 0.0;
    double embedded_min = 0.0;  ///< raw embedded distance range used for min-max
    double embedded_max = 0.0;
    std::uint64_t rng_seed = 0;

    std::uint64_t count(std::size_t x_bin, std::size_t y_bin) const { return counts[x_bin * bins + y_bin]; }
};

/// Input distance between items i and j.
using InputDistance = std::function<double(std::size_t, std::size_t)>;

/// Histogram of (input distance, min-max normalized embedded distance) over
/// `pairs` uniformly drawn pairs i != j, plus the Pearson correlation of the
/// raw pairs.
HeatmapGrid distance_heatmap(const InputDistance& input, const Embedding& emb, std::size_t pairs,
                             std::size_t bins, std::uint64_t rng_seed);
HeatmapGrid distance_heatmap(const DistanceMatrix& input, const Embedding& emb, std::size_t pairs,
                             std::size_t bins, std::uint64_t rng_seed);
/// Input distances computed on demand with Smith-Waterman.
HeatmapGrid distance_heatmap(const SequenceSet& set, const ScoringScheme& scheme, const Embedding& emb,
                             std::size_t pairs, std::size_t bins, std::uint64_t rng_seed);

/// Same histogram over every unordered pair i < j.
HeatmapGrid distance_heatmap_exhaustive(const InputDistance& input, const Embedding& emb, std::size_t bins);

/// Builds the grid from explicit (input, raw embedded) distance pairs.
HeatmapGrid heatmap_from_pairs(const std::vector<double>& input, const std::vector<double>& embedded,
                               std::size_t bins);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct OosAccuracy {
    double accuracy = 1.0;
    std::size_t mismatches = 0;
    std::size_t total = 0;
    std::vector<std::string> mismatched_ids;
};

/// Fraction of held-out ids that keep their baseline cluster index.
OosAccuracy oos_accuracy(const ClusterLabels& baseline, const ClusterLabels& oos,
                         const std::vector<std::string>& heldout_ids);

/// Percentage with two decimals, truncated toward zero (0.99575 -> "99.57%").
std::string format_percent(double fraction);

} // namespace seqae

namespace seqae {

/// Least-squares affine map (d x d plus translation) taking `source` rows onto
/// `target` rows, fitted on `fit_rows` only and applied to every row.
/// Per-cluster mean of `emb` over `rows`, using `labels` (one per row of emb).
Centroids transfer_centroids(const Embedding& emb, const std::vector<int>& labels, std::size_t k,
                             const std::vector<std::size_t>& rows);

Embedding align_affine(const Embedding& source, const Embedding& target, const std::vector<std::size_t>& fit_rows);

/// How the baseline centroids are carried into the retrained embedding.
/// `none` reuses the raw coordinates. `affine` maps the retrained embedding
/// onto the baseline frame with a least-squares fit on the training rows.
/// `transfer` recomputes each baseline cluster's centroid in the retrained
/// embedding from its training rows.
enum class OosFrame { none, affine, transfer };

OosFrame parse_oos_frame(std::string_view text);
std::string_view to_string(OosFrame f);

struct OosOptions {
    double holdout = 0.1;            ///< fraction of the set left out of retraining
    OosFrame frame = OosFrame::transfer;
    std::size_t k = 5;
    std::size_t kmeans_max_iter = 300;
    double kmeans_tol = 1e-6;
    std::uint64_t kmeans_seed = 0;   ///< baseline k-means++ seeding
    std::uint64_t holdout_seed = 0;
    unsigned threads = 1;
};

struct OosReport {
    std::size_t n_total = 0;
    std::size_t n_train = 0;
    std::size_t n_heldout = 0;
    std::size_t panel_size = 0;
    OosOptions options;
    std::uint64_t panel_seed = 0;
    NetworkSpec spec;
    TrainConfig train;
    double baseline_final_loss = 0.0;
    double retrained_final_loss = 0.0;
    std::vector<std::string> heldout_ids;
    ClusterLabels baseline_labels;
    ClusterLabels oos_labels;
    Centroids baseline_centroids;
    OosAccuracy result;

    /// Human-readable report echoing every seed and setting.
    std::string to_text() const;
};

/// Out-of-sample protocol:
///  1. reference-encode the whole set with the frozen panel, train, embed,
///     and run seeded k-means: the baseline;
///  2. hold out a random fraction of the non-reference sequences and retrain
///     on the rest with the same network and training settings;
///  3. embed every sequence with the retrained encoder and, with `align`,
///     map it onto the baseline frame using the training rows;
///  4. run k-means started from the baseline centroids;
///  5. score the held-out sequences against their baseline clusters.
OosReport oos_protocol(const SequenceSet& set, const ReferencePanel& panel, const NetworkSpec& spec,
                       const TrainConfig& cfg, const OosOptions& opts);

} // namespace seqae
