#include "seqae/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "seqae/alignment.hpp"
#include "seqae/baseline_mds.hpp"
#include "seqae/clustering_eval.hpp"
#include "seqae/error.hpp"
#include "seqae/matrix_io.hpp"
#include "seqae/rng.hpp"
#include "seqae/tables.hpp"

namespace seqae::pipeline {

namespace fs = std::filesystem;

namespace {

void say(const Logger& log, const std::string& msg) {
    if (log) log(msg);
}

void require(const std::string& path, const char* what) {
    if (path.empty()) throw ArgumentError(std::string("missing ") + what + " path");
}

SequenceSet load_sequences(const PipelineConfig& cfg, const std::string& path) {
    require(path, "FASTA input");
    return read_fasta(path, Alphabet(cfg.alphabet));
}

Json counters_json(const AlignmentCounters& c) {
    return Json{{"alignments", c.alignments}, {"cells", c.cells}};
}

std::string counters_text(const AlignmentCounters& c) {
    return std::to_string(c.alignments) + " alignments, " + std::to_string(c.cells) + " DP cells";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json scheme_json(const ScoringScheme& s) {
    return Json{{"match", s.match}, {"mismatch", s.mismatch}, {"gap", s.gap}};
}

// Reorders `set` to follow the embedding's ids.
SequenceSet in_embedding_order(const SequenceSet& set, const Embedding& emb) {
    std::vector<std::size_t> pos;
    pos.reserve(emb.size());
    for (const auto& id : emb.ids) pos.push_back(set.position(id));
    return set.subset(pos);
}

} // namespace

PipelineConfig echo_config(const PipelineConfig& cfg) {
    PipelineConfig out = cfg;
    out.resolve();
    out.workdir.clear();
    return out;
}

Json run_synth(const PipelineConfig& cfg, const std::string& fasta_out, const std::string& labels_out,
               const Logger& log) {
    require(fasta_out, "FASTA output");
    const auto params = cfg.synth_params();
    const auto ds = synth_dataset(params, Alphabet(cfg.alphabet));
    write_fasta(fasta_out, ds.set);
    if (!labels_out.empty()) write_labels(labels_out, ClusterLabels{ds.set.ids(), ds.labels, params.n_clusters});
    say(log, "synth: " + std::to_string(ds.set.size()) + " sequences in " + std::to_string(params.n_clusters) +
                 " clusters -> " + fasta_out);
    return Json{{"stage", "synth"},
                {"sequences", ds.set.size()},
                {"clusters", params.n_clusters},
                {"max_len", ds.set.max_len()},
                {"seed", params.rng_seed}};
}

Json run_dedup(const PipelineConfig& cfg, const std::string& input, const std::string& unique_out,
               const std::string& recurrent_out, const std::string& multiplicity_out, const Logger& log) {
    const auto set = load_sequences(cfg, input);
    const auto r = dedup(set);
    if (!unique_out.empty()) write_fasta(unique_out, r.unique);
    if (!recurrent_out.empty()) write_fasta(recurrent_out, r.recurrent);
    if (!multiplicity_out.empty()) {
        std::ofstream out(multiplicity_out);
        if (!out) throw Error("cannot write '" + multiplicity_out + "'");
        write_multiplicity(out, r);
    }
    say(log, "dedup: " + std::to_string(set.size()) + " -> " + std::to_string(r.unique.size()) + " unique, " +
                 std::to_string(r.recurrent.size()) + " recurrent");
    return Json{{"stage", "dedup"},
                {"input", set.size()},
                {"unique", r.unique.size()},
                {"recurrent", r.recurrent.size()}};
}

Json run_distmat(const PipelineConfig& cfg, const std::string& input, const std::string& out,
                 const std::string& csv_out, const Logger& log) {
    require(out, "distance matrix output");
    const auto set = load_sequences(cfg, input);
    AlignmentCounters counters;
    const auto d = pairwise_matrix(set, cfg.scheme, cfg.threads, &counters);
    write_distance_matrix(out, d);
    if (!csv_out.empty()) {
        std::ofstream csv(csv_out);
        if (!csv) throw Error("cannot write '" + csv_out + "'");
        write_distance_csv(csv, d);
    }
    say(log, "distmat: " + std::to_string(set.size()) + " sequences, " + counters_text(counters));
    return Json{{"stage", "distmat"},
                {"sequences", set.size()},
                {"scheme", scheme_json(cfg.scheme)},
                {"counters", counters_json(counters)}};
}

Json run_sample_refs(const PipelineConfig& cfg, const std::string& input, const std::string& panel_out,
                     const Logger& log) {
    require(panel_out, "panel output");
    const auto pool = load_sequences(cfg, cfg.panel_pool.empty() ? input : cfg.panel_pool);
    const auto seed = cfg.panel_seed.value();
    const auto panel = sample_references(pool, cfg.refs, seed, cfg.scheme);
    write_panel(panel_out, panel, pool);
    say(log, "sample-refs: K=" + std::to_string(panel.size()) + " from " + std::to_string(pool.size()) +
                 " sequences (seed " + std::to_string(seed) + ")");
    return Json{{"stage", "sample-refs"}, {"refs", panel.size()}, {"pool", pool.size()}, {"seed", seed}};
}

Json run_encode(const PipelineConfig& cfg, const std::string& input, const std::string& panel,
                const std::string& out, const Logger& log) {
    require(out, "encoded output");
    const auto set = load_sequences(cfg, input);
    const Alphabet alphabet(cfg.alphabet);
    EncodedDataset data;
    Json j{{"stage", "encode"}, {"kind", to_string(cfg.kind)}, {"sequences", set.size()}};
    switch (cfg.kind) {
    case EncodingKind::onehot:
        data = one_hot_encode(set, alphabet, cfg.target_len);
        break;
    case EncodingKind::ordinal: {
        auto values = default_ordinal_values();
        data = ordinal_encode(set, values, cfg.target_len, alphabet);
        break;
    }
    case EncodingKind::reference: {
        require(panel, "reference panel");
        const auto pf = read_panel(panel, alphabet);
        AlignmentCounters counters;
        data = reference_encode(set, pf.panel, pf.refs, cfg.threads, &counters);
        say(log, "encode: reference panel K=" + std::to_string(pf.panel.size()) + ", " + counters_text(counters));
        j["counters"] = counters_json(counters);
        break;
    }
    }
    write_encoded(out, data);
    say(log, "encode: " + to_string(cfg.kind) + " " + std::to_string(data.size()) + " x " +
                 std::to_string(data.dim()) + " -> " + out);
    j["dim"] = data.dim();
    return j;
}

Json run_train(const PipelineConfig& cfg, const std::string& encoded, const std::string& model_out,
               const std::string& history_out, const Logger& log) {
    require(encoded, "encoded input");
    require(model_out, "model output");
    const auto data = read_encoded(encoded);
    const auto spec = cfg.network(data.dim());
    const auto tc = cfg.train_config();
    const auto every = std::max<std::size_t>(1, tc.epochs / 10);
    const auto r = train(data, spec, tc, [&](std::size_t epoch, double loss) {
        if (epoch == 1 || epoch % every == 0 || epoch == tc.epochs)
            say(log, "train: epoch " + std::to_string(epoch) + "/" + std::to_string(tc.epochs) +
                         " loss " + format_exact(loss));
    });
    save_model(model_out, r.weights);
    if (!history_out.empty()) {
        std::ostringstream h;
        h << "epoch\tloss\n";
        for (std::size_t e = 0; e < r.history.size(); ++e) h << e + 1 << '\t' << format_exact(r.history[e]) << '\n';
        write_text(history_out, h.str());
    }
    return Json{{"stage", "train"},
                {"network", std::to_string(spec.input_dim) + "x" + format_layer_list(spec.encoder_hidden)},
                {"parameters", r.weights.parameter_count()},
                {"epochs", tc.epochs},
                {"updates", r.updates},
                {"first_loss", r.history.front()},
                {"final_loss", r.history.back()},
                {"init_seed", tc.init_seed},
                {"shuffle_seed", tc.shuffle_seed}};
}

Json run_embed(const PipelineConfig&, const std::string& model, const std::string& encoded,
               const std::string& out, const Logger& log) {
    require(model, "model");
    require(encoded, "encoded input");
    require(out, "embedding output");
    const auto w = load_model(model);
    const auto data = read_encoded(encoded);
    const auto e = embed(w, data);
    write_embedding(out, e);
    say(log, "embed: " + std::to_string(e.size()) + " points in " + std::to_string(e.dim()) + "D -> " + out);
    return Json{{"stage", "embed"}, {"points", e.size()}, {"dim", e.dim()}};
}

Json run_kmeans(const PipelineConfig& cfg, const std::string& embedding, const std::string& labels_out,
                const std::string& centroids_out, const std::string& init_centroids, const Logger& log) {
    require(embedding, "embedding");
    require(labels_out, "labels output");
    const auto e = read_embedding(embedding);
    KMeansOptions opts;
    opts.k = cfg.clusters;
    opts.max_iter = cfg.kmeans_max_iter;
    opts.tol = cfg.kmeans_tol;
    opts.rng_seed = cfg.kmeans_seed.value();
    if (!init_centroids.empty()) opts.initial = read_centroids(init_centroids);
    const auto r = kmeans(e, opts);
    write_labels(labels_out, r.labels);
    if (!centroids_out.empty()) write_centroids(centroids_out, r.centroids);
    say(log, "kmeans: k=" + std::to_string(opts.k) + " converged after " + std::to_string(r.iterations) +
                 " iterations, objective " + format_exact(r.objective.back()));
    return Json{{"stage", "kmeans"},
                {"k", opts.k},
                {"init", init_centroids.empty() ? "kmeans++" : "fixed"},
                {"seed", opts.rng_seed},
                {"iterations", r.iterations},
                {"objective", r.objective.back()}};
}

Json run_silhouette(const PipelineConfig&, const std::string& embedding, const std::string& labels,
                    const std::string& report_out, const Logger& log) {
    require(embedding, "embedding");
    require(labels, "labels");
    const auto e = read_embedding(embedding);
    const auto l = align_labels(read_labels(labels), e.ids);
    const auto s = silhouette(e, l);
    if (!report_out.empty()) {
        std::ostringstream o;
        o << "# mean=" << format_exact(s.mean) << "\n# points=" << e.size() << "\n# clusters=" << l.k << '\n'
          << "id\tlabel\tsilhouette\n";
        for (std::size_t i = 0; i < e.size(); ++i)
            o << e.ids[i] << '\t' << l.labels[i] << '\t' << format_exact(s.per_point[i]) << '\n';
        write_text(report_out, o.str());
    }
    say(log, "silhouette: mean " + format_exact(s.mean) + " over " + std::to_string(e.size()) + " points");
    return Json{{"stage", "silhouette"}, {"mean", s.mean}, {"points", e.size()}, {"clusters", l.k}};
}

Json run_heatmap(const PipelineConfig& cfg, const std::string& embedding, const std::string& distmat,
                 const std::string& input, const std::string& csv_out, const Logger& log) {
    require(embedding, "embedding");
    require(csv_out, "heatmap output");
    const auto e = read_embedding(embedding);
    const auto seed = cfg.heatmap_seed.value();
    HeatmapGrid g;
    if (!distmat.empty()) {
        g = distance_heatmap(read_distance_matrix(distmat), e, cfg.heatmap_pairs, cfg.heatmap_bins, seed);
    } else {
        const auto set = in_embedding_order(load_sequences(cfg, input), e);
        g = distance_heatmap(set, cfg.scheme, e, cfg.heatmap_pairs, cfg.heatmap_bins, seed);
    }
    write_heatmap(csv_out, g);
    say(log, "heatmap: " + std::to_string(g.pairs) + " pairs, pearson " + format_exact(g.pearson));
    return Json{{"stage", "heatmap"},
                {"pairs", g.pairs},
                {"bins", g.bins},
                {"seed", seed},
                {"pearson", g.pearson},
                {"embedded_max", g.embedded_max},
                {"source", distmat.empty() ? "smith-waterman" : "distance-matrix"}};
}

Json run_oos(const PipelineConfig& cfg, const std::string& input, const std::string& panel,
             const std::string& report_out, const Logger& log) {
    const auto set = load_sequences(cfg, input);
    ReferencePanel p = panel.empty() ? sample_references(set, cfg.refs, cfg.panel_seed.value(), cfg.scheme)
                                     : read_panel(panel, Alphabet(cfg.alphabet)).panel;
    OosOptions opts;
    opts.holdout = cfg.holdout;
    opts.frame = cfg.oos_frame;
    opts.k = cfg.clusters;
    opts.kmeans_max_iter = cfg.kmeans_max_iter;
    opts.kmeans_tol = cfg.kmeans_tol;
    opts.kmeans_seed = cfg.kmeans_seed.value();
    opts.holdout_seed = cfg.holdout_seed.value();
    opts.threads = cfg.threads;
    say(log, "oos: training baseline and held-out models");
    const auto rep = oos_protocol(set, p, cfg.network(p.size()), cfg.train_config(), opts);
    if (!report_out.empty()) {
        std::ostringstream o;
        o << rep.to_text();
        o << "mismatched ids\n";
        for (const auto& id : rep.result.mismatched_ids) o << "  " << id << '\n';
        write_text(report_out, o.str());
    }
    say(log, "oos: " + std::to_string(rep.result.mismatches) + "/" + std::to_string(rep.result.total) +
                 " incorrect, accuracy " + format_percent(rep.result.accuracy));
    return Json{{"stage", "oos"},
                {"sequences", rep.n_total},
                {"heldout", rep.n_heldout},
                {"refs", rep.panel_size},
                {"k", opts.k},
                {"frame", std::string(to_string(opts.frame))},
                {"mismatches", rep.result.mismatches},
                {"accuracy", rep.result.accuracy},
                {"accuracy_text", format_percent(rep.result.accuracy)}};
}

Json run_smacof(const PipelineConfig& cfg, const std::string& distmat, const std::string& out,
                const std::string& history_out, const Logger& log) {
    require(distmat, "distance matrix");
    require(out, "embedding output");
    const auto d = read_distance_matrix(distmat);
    std::vector<std::string> ids;
    if (!cfg.input.empty()) {
        const auto set = load_sequences(cfg, cfg.input);
        if (set.size() == d.rows()) ids = set.ids();
    }
    const auto mc = cfg.mds_config();
    const auto r = smacof(d, mc, ids);
    write_embedding(out, r.embedding);
    if (!history_out.empty()) {
        std::ostringstream h;
        h << "iteration\tstress\n";
        for (std::size_t i = 0; i < r.stress_history.size(); ++i)
            h << i << '\t' << format_exact(r.stress_history[i]) << '\n';
        write_text(history_out, h.str());
    }
    say(log, "smacof: " + std::to_string(r.iterations) + " iterations, stress " +
                 format_exact(r.stress_history.front()) + " -> " + format_exact(r.stress_history.back()));
    return Json{{"stage", "smacof"},
                {"points", d.rows()},
                {"dim", mc.target_dim},
                {"iterations", r.iterations},
                {"seed", mc.rng_seed},
                {"initial_stress", r.stress_history.front()},
                {"final_stress", r.stress_history.back()}};
}

Arm parse_arm(const std::string& s) {
    if (s == "a" || s == "damds" || s == "smacof") return Arm::damds;
    if (s == "b" || s == "onehot") return Arm::onehot;
    if (s == "c" || s == "reference") return Arm::reference;
    throw ConfigError("unknown pipeline arm '" + s + "' (expected a, b or c)");
}

std::string to_string(Arm arm) {
    switch (arm) {
    case Arm::damds: return "a";
    case Arm::onehot: return "b";
    case Arm::reference: return "c";
    }
    return "?";
}

Json run_pipeline(const PipelineConfig& in_cfg, Arm arm, const Logger& log) {
    PipelineConfig cfg = in_cfg;
    cfg.resolve();
    if (cfg.input.empty()) throw ArgumentError("pipeline needs data.input (a FASTA file)");
    const fs::path wd = cfg.effective_workdir();
    fs::create_directories(wd);
    auto at = [&](const char* name) { return (wd / name).string(); };

    const auto echoed = echo_config(cfg);
    write_config(at("config.ini"), echoed);

    Json stages = Json::array();
    std::string distmat;
    switch (arm) {
    case Arm::damds:
        distmat = at("distmat.swdm");
        stages.push_back(run_distmat(cfg, cfg.input, distmat, "", log));
        stages.push_back(run_smacof(cfg, distmat, at("embedding.tsv"), at("stress.tsv"), log));
        break;
    case Arm::onehot: {
        PipelineConfig c = cfg;
        c.kind = EncodingKind::onehot;
        stages.push_back(run_encode(c, cfg.input, "", at("encoded.enc"), log));
        stages.push_back(run_train(cfg, at("encoded.enc"), at("model.aemd"), at("history.tsv"), log));
        stages.push_back(run_embed(cfg, at("model.aemd"), at("encoded.enc"), at("embedding.tsv"), log));
        break;
    }
    case Arm::reference: {
        PipelineConfig c = cfg;
        c.kind = EncodingKind::reference;
        stages.push_back(run_sample_refs(c, cfg.input, at("panel.tsv"), log));
        stages.push_back(run_encode(c, cfg.input, at("panel.tsv"), at("encoded.enc"), log));
        stages.push_back(run_train(cfg, at("encoded.enc"), at("model.aemd"), at("history.tsv"), log));
        stages.push_back(run_embed(cfg, at("model.aemd"), at("encoded.enc"), at("embedding.tsv"), log));
        break;
    }
    }

    stages.push_back(run_kmeans(cfg, at("embedding.tsv"), at("labels.tsv"), at("centroids.tsv"), "", log));
    const std::string eval_labels = cfg.labels.empty() ? at("labels.tsv") : cfg.labels;
    auto sc = run_silhouette(cfg, at("embedding.tsv"), eval_labels, at("silhouette.tsv"), log);
    sc["labels"] = cfg.labels.empty() ? "kmeans" : "provided";
    stages.push_back(sc);
    stages.push_back(run_heatmap(cfg, at("embedding.tsv"), distmat, cfg.input, at("heatmap.csv"), log));

    Json summary{{"arm", to_string(arm)},
                 {"silhouette", sc["mean"]},
                 {"pearson", stages.back()["pearson"]},
                 {"stages", stages},
                 {"config", config_to_string(echoed)}};
    write_json(at("summary.json"), summary);
    return summary;
}

Json run_sweep(const PipelineConfig& in_cfg, const std::string& input, const std::string& table_out,
               const Logger& log) {
    PipelineConfig cfg = in_cfg;
    cfg.resolve();
    require(table_out, "sweep table output");
    if (cfg.sweep_repeats < 1) throw ConfigError("sweep.repeats must be >= 1");
    const auto set = load_sequences(cfg, input);
    std::optional<ClusterLabels> truth;
    if (!cfg.labels.empty()) truth = align_labels(read_labels(cfg.labels), set.ids());
    const auto tc = cfg.train_config();

    Json rows = Json::array();
    Json runs = Json::array();
    std::ostringstream table, run_table;
    table << "refs\tmax\tmin\tavg\n";
    run_table << "refs\trepeat\tpanel_seed\tsilhouette\n";
    for (auto k : cfg.sweep_refs) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t r = 0; r < cfg.sweep_repeats; ++r) {
            const auto seed = derive_seed(*cfg.panel_seed, r);
            const auto panel = sample_references(set, k, seed, cfg.scheme);
            const auto data = reference_encode(set, panel, set, cfg.threads);
            const auto tr = train(data, cfg.network(data.dim()), tc);
            const auto e = embed(tr.weights, data);
            ClusterLabels labels;
            if (truth) {
                labels = *truth;
            } else {
                KMeansOptions opts;
                opts.k = cfg.clusters;
                opts.max_iter = cfg.kmeans_max_iter;
                opts.tol = cfg.kmeans_tol;
                opts.rng_seed = *cfg.kmeans_seed;
                labels = kmeans(e, opts).labels;
            }
            const double sc = silhouette(e, labels).mean;
            hi = std::max(hi, sc);
            lo = std::min(lo, sc);
            sum += sc;
            run_table << k << '\t' << r << '\t' << seed << '\t' << format_exact(sc) << '\n';
            runs.push_back(Json{{"refs", k}, {"repeat", r}, {"panel_seed", seed}, {"silhouette", sc}});
            say(log, "sweep: K=" + std::to_string(k) + " repeat " + std::to_string(r + 1) + "/" +
                         std::to_string(cfg.sweep_repeats) + " silhouette " + format_exact(sc));
        }
        const double avg = sum / static_cast<double>(cfg.sweep_repeats);
        table << k << '\t' << format_exact(hi) << '\t' << format_exact(lo) << '\t' << format_exact(avg) << '\n';
        rows.push_back(Json{{"refs", k}, {"max", hi}, {"min", lo}, {"avg", avg}});
    }
    write_text(table_out, table.str());
    write_text(table_out + ".runs.tsv", run_table.str());
    return Json{{"stage", "sweep"},
                {"labels", truth ? "provided" : "kmeans"},
                {"repeats", cfg.sweep_repeats},
                {"table", rows},
                {"runs", runs}};
}

} // namespace seqae::pipeline
