#include <doctest.h>

#include <filesystem>

#include <unistd.h>

#include "oracles.hpp"
#include "seqae/config.hpp"
#include "seqae/error.hpp"
#include "seqae/pipeline.hpp"

namespace fs = std::filesystem;
using namespace seqae;
namespace pl = seqae::pipeline;

namespace {
struct Scratch {
    fs::path root;
    Scratch() {
        root = fs::temp_directory_path() / ("seqae_pipeline_" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~Scratch() { fs::remove_all(root); }
    std::string at(const std::string& name) const { return (root / name).string(); }
};

PipelineConfig small(const Scratch& s) {
    PipelineConfig c;
    c.synth_clusters = 3;
    c.synth_per_cluster = 20;
    c.synth_seed_len = 60;
    c.refs = 8;
    c.encoder = {16, 3};
    c.epochs = 5;
    c.batch_size = 16;
    c.clusters = 3;
    c.heatmap_pairs = 500;
    c.heatmap_bins = 10;
    c.mds_max_iter = 50;
    c.input = s.at("data.fasta");
    c.labels = s.at("truth.tsv");
    c.resolve();
    pl::run_synth(c, c.input, c.labels);
    return c;
}

void same_file(const fs::path& a, const fs::path& b) {
    INFO(a.string());
    REQUIRE(fs::exists(a));
    REQUIRE(fs::exists(b));
    CHECK(oracle::slurp(a) == oracle::slurp(b));
}
} // namespace

TEST_CASE("pipeline: stage-by-stage composition equals the fused arm") {
    Scratch s;
    auto cfg = small(s);
    cfg.workdir = s.at("fused");
    auto summary = pl::run_pipeline(cfg, pl::Arm::reference);
    CHECK(summary["arm"] == "c");

    fs::create_directories(s.at("manual"));
    auto m = [&](const char* n) { return (fs::path(s.at("manual")) / n).string(); };
    pl::run_sample_refs(cfg, cfg.input, m("panel.tsv"));
    pl::run_encode(cfg, cfg.input, m("panel.tsv"), m("encoded.enc"));
    pl::run_train(cfg, m("encoded.enc"), m("model.aemd"), m("history.tsv"));
    pl::run_embed(cfg, m("model.aemd"), m("encoded.enc"), m("embedding.tsv"));
    pl::run_kmeans(cfg, m("embedding.tsv"), m("labels.tsv"), m("centroids.tsv"), "");
    pl::run_silhouette(cfg, m("embedding.tsv"), cfg.labels, m("silhouette.tsv"));
    pl::run_heatmap(cfg, m("embedding.tsv"), "", cfg.input, m("heatmap.csv"));
    for (const char* f : {"panel.tsv", "encoded.enc", "model.aemd", "history.tsv", "embedding.tsv", "labels.tsv",
                          "centroids.tsv", "silhouette.tsv", "heatmap.csv", "heatmap.csv.meta"})
        same_file(fs::path(s.at("fused")) / f, m(f));
}

TEST_CASE("pipeline: every arm replays from its echoed config") {
    Scratch s;
    auto cfg = small(s);
    for (auto arm : {pl::Arm::damds, pl::Arm::onehot, pl::Arm::reference}) {
        cfg.workdir = s.at("first_" + pl::to_string(arm));
        pl::run_pipeline(cfg, arm);
        auto replay = read_config((fs::path(cfg.workdir) / "config.ini").string());
        CHECK(replay.workdir.empty());
        replay.workdir = s.at("second_" + pl::to_string(arm));
        pl::run_pipeline(replay, arm);
        for (const auto& entry : fs::directory_iterator(cfg.workdir))
            same_file(entry.path(), fs::path(replay.workdir) / entry.path().filename());
        CHECK(fs::exists(fs::path(cfg.workdir) / "summary.json"));
        CHECK(fs::exists(fs::path(cfg.workdir) / "embedding.tsv"));
    }
    CHECK(fs::exists(fs::path(s.at("first_a")) / "stress.tsv"));
    CHECK(fs::exists(fs::path(s.at("first_b")) / "model.aemd"));
}

TEST_CASE("pipeline: sweep reports one row per K") {
    Scratch s;
    auto cfg = small(s);
    cfg.sweep_refs = {4, 8};
    cfg.sweep_repeats = 2;
    auto j = pl::run_sweep(cfg, cfg.input, s.at("sweep.tsv"));
    REQUIRE(j["table"].size() == 2);
    CHECK(j["runs"].size() == 4);
    for (const auto& row : j["table"]) {
        CHECK(row["min"].get<double>() <= row["avg"].get<double>());
        CHECK(row["avg"].get<double>() <= row["max"].get<double>());
    }
    auto text = oracle::slurp(s.at("sweep.tsv"));
    CHECK(text.rfind("refs\tmax\tmin\tavg\n", 0) == 0);
}

TEST_CASE("pipeline: missing inputs and bad arms are reported") {
    Scratch s;
    PipelineConfig cfg;
    cfg.resolve();
    CHECK_THROWS_AS(pl::run_pipeline(cfg, pl::Arm::reference), ArgumentError);
    CHECK_THROWS_AS(pl::parse_arm("d"), ConfigError);
    CHECK_THROWS(pl::run_encode(cfg, s.at("missing.fasta"), "", s.at("out.enc")));
    CHECK(pl::parse_arm("a") == pl::Arm::damds);
    CHECK(pl::parse_arm("reference") == pl::Arm::reference);
}

TEST_CASE("pipeline: oos stage reports its frame and holds out non-references") {
    Scratch s;
    auto cfg = small(s);
    cfg.holdout = 0.2;
    for (auto f : {OosFrame::affine, OosFrame::transfer}) {
        cfg.oos_frame = f;
        auto j = pl::run_oos(cfg, cfg.input, "", s.at("oos.txt"));
        CHECK(j["heldout"] == 12);
        CHECK(j["frame"] == std::string(to_string(f)));
        CHECK(j["accuracy"].get<double>() >= 0.0);
        CHECK(oracle::slurp(s.at("oos.txt")).find("centroid frame     " + std::string(to_string(f))) !=
              std::string::npos);
    }
}
