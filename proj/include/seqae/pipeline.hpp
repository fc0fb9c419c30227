#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "seqae/config.hpp"

namespace seqae::pipeline {

using Json = nlohmann::ordered_json;
using Logger = std::function<void(const std::string&)>;

// File-level stages. Every stage takes a resolved config plus explicit paths,
// writes its artifacts, and returns a machine-readable summary. The CLI
// subcommands are thin wrappers over these, and run_pipeline chains the same
// calls, so running stages one by one reproduces the fused command's files.

Json run_synth(const PipelineConfig& cfg, const std::string& fasta_out, const std::string& labels_out,
               const Logger& log = {});

Json run_dedup(const PipelineConfig& cfg, const std::string& input, const std::string& unique_out,
               const std::string& recurrent_out, const std::string& multiplicity_out, const Logger& log = {});

/// Writes the SWDM matrix and, when `csv_out` is nonempty, a CSV copy.
Json run_distmat(const PipelineConfig& cfg, const std::string& input, const std::string& out,
                 const std::string& csv_out, const Logger& log = {});

/// Panel of cfg.refs references drawn with cfg.panel_seed, from cfg.panel_pool
/// when set, else from `input`.
Json run_sample_refs(const PipelineConfig& cfg, const std::string& input, const std::string& panel_out,
                     const Logger& log = {});

/// Encoding kind from cfg.kind; `panel` is required for reference encoding.
Json run_encode(const PipelineConfig& cfg, const std::string& input, const std::string& panel,
                const std::string& out, const Logger& log = {});

Json run_train(const PipelineConfig& cfg, const std::string& encoded, const std::string& model_out,
               const std::string& history_out, const Logger& log = {});

Json run_embed(const PipelineConfig& cfg, const std::string& model, const std::string& encoded,
               const std::string& out, const Logger& log = {});

/// Seeded k-means++ unless `init_centroids` names a centroid file.
Json run_kmeans(const PipelineConfig& cfg, const std::string& embedding, const std::string& labels_out,
                const std::string& centroids_out, const std::string& init_centroids, const Logger& log = {});

Json run_silhouette(const PipelineConfig& cfg, const std::string& embedding, const std::string& labels,
                    const std::string& report_out, const Logger& log = {});

/// Input distances come from `distmat` when given, else Smith-Waterman on the
/// FASTA `input`.
Json run_heatmap(const PipelineConfig& cfg, const std::string& embedding, const std::string& distmat,
                 const std::string& input, const std::string& csv_out, const Logger& log = {});

/// Panel from `panel` when given, else sampled from the input with cfg.refs.
Json run_oos(const PipelineConfig& cfg, const std::string& input, const std::string& panel,
             const std::string& report_out, const Logger& log = {});

Json run_smacof(const PipelineConfig& cfg, const std::string& distmat, const std::string& out,
                const std::string& history_out, const Logger& log = {});

enum class Arm { damds, onehot, reference };  ///< (a), (b), (c)
Arm parse_arm(const std::string& s);
std::string to_string(Arm arm);

/// One arm end to end into cfg.effective_workdir(): artifacts, config.ini
/// (the echoed config) and summary.json.
Json run_pipeline(const PipelineConfig& cfg, Arm arm, const Logger& log = {});

/// For every K in cfg.sweep_refs, cfg.sweep_repeats panels; silhouette per run
/// and max/min/avg per K.
Json run_sweep(const PipelineConfig& cfg, const std::string& input, const std::string& table_out,
               const Logger& log = {});

/// Config as echoed into run artifacts: resolved, workdir cleared.
PipelineConfig echo_config(const PipelineConfig& cfg);

} // namespace seqae::pipeline
