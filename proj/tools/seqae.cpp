// seqae: command-line driver for the sequence embedding pipeline.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "seqae/error.hpp"
#include "seqae/pipeline.hpp"

namespace fs = std::filesystem;
using namespace seqae;
using pipeline::Json;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    std::string workdir;
    std::string summary_path;
    bool quiet = false;
};

struct Paths {
    std::string input, output, panel, encoded, model, embedding, labels, centroids, init, distmat, csv,
        history, report, unique, recurrent, multiplicity;
};

struct Shorthands {
    std::string kind;
    std::optional<std::size_t> refs, k, epochs, target_len;
    std::string arm = "c";
};

PipelineConfig load(const Common& c) {
    PipelineConfig cfg = c.config_path.empty() ? PipelineConfig{} : read_config(c.config_path);
    for (const auto& kv : c.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ArgumentError("--set expects section.key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.threads) cfg.threads = *c.threads;
    if (c.seed) cfg.seed = *c.seed;
    if (!c.workdir.empty()) cfg.workdir = c.workdir;
    return cfg;
}

void apply(PipelineConfig& cfg, const Shorthands& s) {
    if (!s.kind.empty()) cfg.kind = parse_encoding_kind(s.kind);
    if (s.refs) cfg.refs = *s.refs;
    if (s.k) cfg.clusters = *s.k;
    if (s.epochs) cfg.epochs = *s.epochs;
    if (s.target_len) cfg.target_len = *s.target_len;
}

// Empty path: `name` under the work directory.
std::string or_default(const std::string& path, const PipelineConfig& cfg, const char* name) {
    if (!path.empty()) return path;
    fs::path wd = cfg.effective_workdir();
    fs::create_directories(wd);
    return (wd / name).string();
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("-c,--config", c.config_path, "INI config file")->check(CLI::ExistingFile);
    app->add_option("--set", c.overrides, "override a config value, section.key=value (repeatable)");
    app->add_option("-t,--threads", c.threads, "worker threads for alignment");
    app->add_option("--seed", c.seed, "global seed; stage seeds derive from it unless set explicitly");
    app->add_option("-w,--workdir", c.workdir, "work directory for default artifact paths");
    app->add_option("--summary", c.summary_path, "also write the run summary JSON here");
    app->add_flag("-q,--quiet", c.quiet, "suppress progress logs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"seqae: alignment-based sequence embeddings with autoencoders"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "seqae 1.0");

    Common common;
    Paths p;
    Shorthands sh;

    auto* synth = app.add_subcommand("synth", "generate a clustered synthetic FASTA set");
    synth->add_option("-o,--out", p.output, "FASTA output [workdir/synth.fasta]");
    synth->add_option("--labels-out", p.labels, "true labels TSV [workdir/truth.tsv]");

    auto* dedupc = app.add_subcommand("dedup", "collapse identical sequences");
    dedupc->add_option("-i,--input", p.input, "FASTA input [data.input]");
    dedupc->add_option("-o,--out", p.unique, "unique FASTA [workdir/unique.fasta]");
    dedupc->add_option("--recurrent", p.recurrent, "FASTA of sequences seen more than once");
    dedupc->add_option("--multiplicity", p.multiplicity, "id/count TSV");

    auto* distmat = app.add_subcommand("distmat", "all-pairs Smith-Waterman distance matrix");
    distmat->add_option("-i,--input", p.input, "FASTA input [data.input]");
    distmat->add_option("-o,--out", p.distmat, "SWDM output [workdir/distmat.swdm]");
    distmat->add_option("--csv", p.csv, "also write a CSV copy");

    auto* refs = app.add_subcommand("sample-refs", "draw a reference panel");
    refs->add_option("-i,--input", p.input, "FASTA input [data.input]");
    refs->add_option("-o,--out", p.panel, "panel TSV [workdir/panel.tsv]");
    refs->add_option("-K,--refs", sh.refs, "panel size");

    auto* encode = app.add_subcommand("encode", "encode sequences as fixed-width vectors");
    encode->add_option("-i,--input", p.input, "FASTA input [data.input]");
    encode->add_option("--panel", p.panel, "reference panel [workdir/panel.tsv]");
    encode->add_option("-o,--out", p.encoded, "encoded output [workdir/encoded.enc]");
    encode->add_option("--kind", sh.kind, "onehot | ordinal | reference");
    encode->add_option("--target-len", sh.target_len, "pad length for onehot/ordinal");

    auto* trainc = app.add_subcommand("train", "train the autoencoder");
    trainc->add_option("--encoded", p.encoded, "encoded input [workdir/encoded.enc]");
    trainc->add_option("-o,--out", p.model, "model output [workdir/model.aemd]");
    trainc->add_option("--history", p.history, "loss history TSV [workdir/history.tsv]");
    trainc->add_option("--epochs", sh.epochs, "training epochs");

    auto* embedc = app.add_subcommand("embed", "project encoded rows through the encoder");
    embedc->add_option("--model", p.model, "model [workdir/model.aemd]");
    embedc->add_option("--encoded", p.encoded, "encoded input [workdir/encoded.enc]");
    embedc->add_option("-o,--out", p.embedding, "embedding TSV [workdir/embedding.tsv]");

    auto* km = app.add_subcommand("kmeans", "cluster an embedding");
    km->add_option("--embedding", p.embedding, "embedding TSV [workdir/embedding.tsv]");
    km->add_option("-o,--out", p.labels, "labels TSV [workdir/labels.tsv]");
    km->add_option("--centroids", p.centroids, "centroid TSV [workdir/centroids.tsv]");
    km->add_option("--init", p.init, "fixed initial centroids TSV");
    km->add_option("-k,--k", sh.k, "number of clusters");

    auto* sil = app.add_subcommand("silhouette", "mean silhouette of a labelled embedding");
    sil->add_option("--embedding", p.embedding, "embedding TSV [workdir/embedding.tsv]");
    sil->add_option("--labels", p.labels, "labels TSV [data.labels, else workdir/labels.tsv]");
    sil->add_option("-o,--out", p.report, "per-point report [workdir/silhouette.tsv]");

    auto* heat = app.add_subcommand("heatmap", "input vs embedded distance density");
    heat->add_option("--embedding", p.embedding, "embedding TSV [workdir/embedding.tsv]");
    heat->add_option("--distmat", p.distmat, "input distances from an SWDM matrix");
    heat->add_option("-i,--input", p.input, "FASTA for on-the-fly alignment [data.input]");
    heat->add_option("-o,--out", p.csv, "heatmap CSV [workdir/heatmap.csv]");

    auto* oos = app.add_subcommand("oos", "out-of-sample cluster agreement");
    oos->add_option("-i,--input", p.input, "FASTA input [data.input]");
    oos->add_option("--panel", p.panel, "reference panel (sampled when omitted)");
    oos->add_option("-o,--out", p.report, "report [workdir/oos.txt]");
    oos->add_option("-K,--refs", sh.refs, "panel size when sampling");
    oos->add_option("-k,--k", sh.k, "number of clusters");
    oos->add_option("--epochs", sh.epochs, "training epochs");

    auto* mds = app.add_subcommand("smacof", "stress-majorization MDS baseline");
    mds->add_option("--distmat", p.distmat, "SWDM input [workdir/distmat.swdm]");
    mds->add_option("-o,--out", p.embedding, "embedding TSV [workdir/embedding.tsv]");
    mds->add_option("--history", p.history, "stress history TSV [workdir/stress.tsv]");

    auto* pipe = app.add_subcommand("pipeline", "one arm end to end: a (SMACOF), b (one-hot AE), c (reference AE)");
    pipe->add_option("-i,--input", p.input, "FASTA input [data.input]");
    pipe->add_option("--arm", sh.arm, "a | b | c")->capture_default_str();
    pipe->add_option("-K,--refs", sh.refs, "panel size");
    pipe->add_option("-k,--k", sh.k, "number of clusters");
    pipe->add_option("--epochs", sh.epochs, "training epochs");

    auto* sweep = app.add_subcommand("sweep", "silhouette over repeated panels per K");
    sweep->add_option("-i,--input", p.input, "FASTA input [data.input]");
    sweep->add_option("-o,--out", p.report, "table TSV [workdir/sweep.tsv]");
    sweep->add_option("--epochs", sh.epochs, "training epochs");

    auto* echo = app.add_subcommand("config", "print the resolved config");

    for (auto* sub : app.get_subcommands({})) add_common(sub, common);

    CLI11_PARSE(app, argc, argv);

    auto* cmd = app.get_subcommands().front();
    const std::string stage = cmd->get_name();
    pipeline::Logger log;
    if (!common.quiet) log = [&](const std::string& m) { std::cerr << "[" << stage << "] " << m << '\n'; };

    try {
        PipelineConfig cfg = load(common);
        apply(cfg, sh);
        if (!p.input.empty()) cfg.input = p.input;
        cfg.resolve();
        const std::string input = cfg.input;
        auto def = [&](const std::string& path, const char* name) { return or_default(path, cfg, name); };

        Json summary;
        if (cmd == synth) {
            summary = pipeline::run_synth(cfg, def(p.output, "synth.fasta"), def(p.labels, "truth.tsv"), log);
        } else if (cmd == dedupc) {
            summary = pipeline::run_dedup(cfg, input, def(p.unique, "unique.fasta"), p.recurrent, p.multiplicity, log);
        } else if (cmd == distmat) {
            summary = pipeline::run_distmat(cfg, input, def(p.distmat, "distmat.swdm"), p.csv, log);
        } else if (cmd == refs) {
            summary = pipeline::run_sample_refs(cfg, input, def(p.panel, "panel.tsv"), log);
        } else if (cmd == encode) {
            const std::string panel = cfg.kind == EncodingKind::reference ? def(p.panel, "panel.tsv") : "";
            summary = pipeline::run_encode(cfg, input, panel, def(p.encoded, "encoded.enc"), log);
        } else if (cmd == trainc) {
            summary = pipeline::run_train(cfg, def(p.encoded, "encoded.enc"), def(p.model, "model.aemd"),
                                          def(p.history, "history.tsv"), log);
        } else if (cmd == embedc) {
            summary = pipeline::run_embed(cfg, def(p.model, "model.aemd"), def(p.encoded, "encoded.enc"),
                                          def(p.embedding, "embedding.tsv"), log);
        } else if (cmd == km) {
            summary = pipeline::run_kmeans(cfg, def(p.embedding, "embedding.tsv"), def(p.labels, "labels.tsv"),
                                           def(p.centroids, "centroids.tsv"), p.init, log);
        } else if (cmd == sil) {
            std::string labels = p.labels.empty() && !cfg.labels.empty() ? cfg.labels : def(p.labels, "labels.tsv");
            summary = pipeline::run_silhouette(cfg, def(p.embedding, "embedding.tsv"), labels,
                                               def(p.report, "silhouette.tsv"), log);
        } else if (cmd == heat) {
            summary = pipeline::run_heatmap(cfg, def(p.embedding, "embedding.tsv"), p.distmat, input,
                                            def(p.csv, "heatmap.csv"), log);
        } else if (cmd == oos) {
            summary = pipeline::run_oos(cfg, input, p.panel, def(p.report, "oos.txt"), log);
        } else if (cmd == mds) {
            summary = pipeline::run_smacof(cfg, def(p.distmat, "distmat.swdm"), def(p.embedding, "embedding.tsv"),
                                           def(p.history, "stress.tsv"), log);
        } else if (cmd == pipe) {
            summary = pipeline::run_pipeline(cfg, pipeline::parse_arm(sh.arm), log);
        } else if (cmd == sweep) {
            summary = pipeline::run_sweep(cfg, input, def(p.report, "sweep.tsv"), log);
        } else if (cmd == echo) {
            std::cout << config_to_string(pipeline::echo_config(cfg));
            return 0;
        }

        summary["seed"] = cfg.seed;
        summary["threads"] = cfg.threads;
        const std::string text = summary.dump(2);
        std::cout << text << '\n';
        if (!common.summary_path.empty()) {
            std::ofstream out(common.summary_path);
            if (!out) throw Error("cannot write '" + common.summary_path + "'");
            out << text << '\n';
        }
    } catch (const ArgumentError& e) {
        std::cerr << "seqae " << stage << ": " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "seqae " << stage << ": config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "seqae " << stage << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
