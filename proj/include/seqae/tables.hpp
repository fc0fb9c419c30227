#pragma once

#include <iosfwd>
#include <string>

#include "seqae/autoencoder.hpp"
#include "seqae/clustering_eval.hpp"

namespace seqae {

// Embedding TSV: "id<TAB>x1..xd" header, then one row per point. Coordinates
// are printed with 17 significant digits so a round trip is exact.
void write_embedding(std::ostream& out, const Embedding& e);
void write_embedding(const std::string& path, const Embedding& e);
Embedding read_embedding(std::istream& in);
Embedding read_embedding(const std::string& path);

// Labels TSV: "id<TAB>label". On read, k = max label + 1 unless `k` is given.
void write_labels(std::ostream& out, const ClusterLabels& l);
void write_labels(const std::string& path, const ClusterLabels& l);
ClusterLabels read_labels(std::istream& in, std::size_t k = 0);
ClusterLabels read_labels(const std::string& path, std::size_t k = 0);

/// Labels reordered to follow `ids`. Throws LookupError for a missing id.
ClusterLabels align_labels(const ClusterLabels& l, const std::vector<std::string>& ids);

// Centroids TSV: "cluster<TAB>x1..xd".
void write_centroids(const std::string& path, const Centroids& c);
Centroids read_centroids(const std::string& path);

/// B x B CSV grid (row = input-distance bin, column = embedded-distance bin).
void write_heatmap_csv(std::ostream& out, const HeatmapGrid& g);
/// key=value sidecar: pairs, bins, seed, pearson, normalization range.
void write_heatmap_meta(std::ostream& out, const HeatmapGrid& g);
void write_heatmap(const std::string& csv_path, const HeatmapGrid& g);

} // namespace seqae
