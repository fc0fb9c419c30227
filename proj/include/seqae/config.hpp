#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seqae/alignment.hpp"
#include "seqae/autoencoder.hpp"
#include "seqae/baseline_mds.hpp"
#include "seqae/clustering_eval.hpp"
#include "seqae/encoding.hpp"
#include "seqae/sequences.hpp"

namespace seqae {

/// Every tunable of the pipeline. Stage seeds left unset are derived from
/// `seed` by resolve(); the resolved form is what gets echoed and replayed.
struct PipelineConfig {
    // [general]
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string workdir;  ///< empty: $SEQAE_WORKDIR, else "."

    // [data]
    std::string input;       ///< FASTA
    std::string labels;      ///< optional ground-truth labels TSV
    std::string alphabet = "ATGC";

    // [scheme]
    ScoringScheme scheme;

    // [synth]
    std::size_t synth_clusters = 5;
    std::size_t synth_per_cluster = 100;
    std::size_t synth_seed_len = 200;
    double synth_mutation_rate = 0.05;
    std::optional<std::uint64_t> synth_seed;

    // [encoding]
    EncodingKind kind = EncodingKind::reference;
    std::size_t refs = 50;                 ///< K
    std::optional<std::uint64_t> panel_seed;
    std::size_t target_len = 0;            ///< 0: longest sequence
    std::string panel_pool;                ///< optional FASTA to draw references from

    // [network]
    std::vector<std::size_t> encoder{128, 3};
    double leaky_slope = 0.01;
    OutputHead output = OutputHead::linear;

    // [train]
    std::size_t epochs = 100;
    std::size_t batch_size = 256;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double momentum = 0.9;
    std::optional<std::uint64_t> init_seed;
    std::optional<std::uint64_t> shuffle_seed;

    // [eval]
    std::size_t clusters = 5;              ///< k for KMeans
    std::size_t kmeans_max_iter = 300;
    double kmeans_tol = 1e-6;
    std::optional<std::uint64_t> kmeans_seed;
    std::size_t heatmap_pairs = 10000;
    std::size_t heatmap_bins = 50;
    std::optional<std::uint64_t> heatmap_seed;
    double holdout = 0.1;
    std::optional<std::uint64_t> holdout_seed;
    OosFrame oos_frame = OosFrame::transfer;

    // [mds]
    std::size_t mds_dim = 3;
    std::size_t mds_max_iter = 1000;
    double mds_eps = 1e-6;
    std::optional<std::uint64_t> mds_seed;

    // [sweep]
    std::vector<std::size_t> sweep_refs{25, 50};
    std::size_t sweep_repeats = 5;

    /// Fills every unset stage seed from `seed`.
    void resolve();
    bool resolved() const;

    /// Sets one "section.key" entry. Throws ConfigError for an unknown key or
    /// an unparsable value.
    void set(const std::string& dotted_key, const std::string& value);

    NetworkSpec network(std::size_t input_dim) const;
    TrainConfig train_config() const;
    MdsConfig mds_config() const;
    SynthParams synth_params() const;

    std::string effective_workdir() const;

    bool operator==(const PipelineConfig&) const = default;
};

/// INI text with one section per stage.
void write_config(std::ostream& out, const PipelineConfig& cfg);
void write_config(const std::string& path, const PipelineConfig& cfg);
std::string config_to_string(const PipelineConfig& cfg);
/// Keys missing from the file keep their defaults.
PipelineConfig read_config(std::istream& in);
PipelineConfig read_config(const std::string& path);
PipelineConfig config_from_string(const std::string& text);

} // namespace seqae
