#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "seqae/clustering_eval.hpp"
#include "seqae/error.hpp"
#include "seqae/rng.hpp"

namespace seqae {

OosReport oos_protocol(const SequenceSet& set, const ReferencePanel& panel, const NetworkSpec& spec,
                       const TrainConfig& cfg, const OosOptions& opts) {
    if (!(opts.holdout > 0.0 && opts.holdout < 1.0)) throw ArgumentError("holdout fraction must lie in (0, 1)");
    const std::size_t n = set.size();
    const auto n_heldout = static_cast<std::size_t>(std::llround(opts.holdout * static_cast<double>(n)));
    if (n_heldout == 0) throw ArgumentError("holdout fraction selects no sequences");

    // references stay in the training set
    const std::unordered_set<std::string> refs(panel.ref_ids.begin(), panel.ref_ids.end());
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n; ++i)
        if (!refs.count(set[i].id)) eligible.push_back(i);
    if (n_heldout > eligible.size())
        throw ArgumentError("holdout of " + std::to_string(n_heldout) + " exceeds the " +
                            std::to_string(eligible.size()) + " non-reference sequences");
    if (n_heldout >= n) throw ArgumentError("holdout leaves no training data");

    OosReport rep;
    rep.n_total = n;
    rep.n_heldout = n_heldout;
    rep.n_train = n - n_heldout;
    rep.panel_size = panel.size();
    rep.panel_seed = panel.rng_seed;
    rep.options = opts;
    rep.spec = spec;
    rep.train = cfg;

    const EncodedDataset data = reference_encode(set, panel, set, opts.threads);

    // (1) baseline
    const TrainResult base = train(data, spec, cfg);
    rep.baseline_final_loss = base.history.back();
    const Embedding base_emb = embed(base.weights, data);
    KMeansOptions km;
    km.k = opts.k;
    km.max_iter = opts.kmeans_max_iter;
    km.tol = opts.kmeans_tol;
    km.rng_seed = opts.kmeans_seed;
    const KMeansResult base_km = kmeans(base_emb, km);
    rep.baseline_labels = base_km.labels;
    rep.baseline_centroids = base_km.centroids;

    // (2) retrain without the held-out rows
    Rng rng(opts.holdout_seed);
    rng.shuffle(eligible);
    std::vector<char> held(n, 0);
    for (std::size_t t = 0; t < n_heldout; ++t) held[eligible[t]] = 1;
    std::vector<std::size_t> train_rows;
    for (std::size_t i = 0; i < n; ++i) {
        if (held[i]) rep.heldout_ids.push_back(set[i].id);
        else train_rows.push_back(i);
    }
    const TrainResult retrained = train(data.subset(train_rows), spec, cfg);
    rep.retrained_final_loss = retrained.history.back();

    // (3) embed everything, (4) k-means from the baseline centers
    Embedding oos_emb = embed(retrained.weights, data);
    switch (opts.frame) {
    case OosFrame::none: km.initial = base_km.centroids; break;
    case OosFrame::affine:
        oos_emb = align_affine(oos_emb, base_emb, train_rows);
        km.initial = base_km.centroids;
        break;
    case OosFrame::transfer: km.initial = transfer_centroids(oos_emb, base_km.labels.labels, opts.k, train_rows); break;
    }
    rep.oos_labels = kmeans(oos_emb, km).labels;

    // (5)
    rep.result = oos_accuracy(rep.baseline_labels, rep.oos_labels, rep.heldout_ids);
    return rep;
}

Centroids transfer_centroids(const Embedding& emb, const std::vector<int>& labels, std::size_t k,
                             const std::vector<std::size_t>& rows) {
    const std::size_t d = emb.dim();
    if (labels.size() != emb.size()) throw DimensionError("transfer_centroids: one label per row expected");
    Centroids c(k, d, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (auto i : rows) {
        const auto l = static_cast<std::size_t>(labels[i]);
        if (l >= k) throw ArgumentError("transfer_centroids: label out of range");
        ++count[l];
        for (std::size_t t = 0; t < d; ++t) c(l, t) += emb.coords(i, t);
    }
    for (std::size_t l = 0; l < k; ++l) {
        if (count[l] == 0)
            throw ArgumentError("transfer_centroids: cluster " + std::to_string(l) + " has no training rows");
        for (std::size_t t = 0; t < d; ++t) c(l, t) /= static_cast<double>(count[l]);
    }
    return c;
}

OosFrame parse_oos_frame(std::string_view text) {
    if (text == "none") return OosFrame::none;
    if (text == "affine") return OosFrame::affine;
    if (text == "transfer") return OosFrame::transfer;
    throw ConfigError("unknown out-of-sample frame '" + std::string(text) + "' (none, affine, transfer)");
}

std::string_view to_string(OosFrame f) {
    switch (f) {
    case OosFrame::none: return "none";
    case OosFrame::affine: return "affine";
    case OosFrame::transfer: return "transfer";
    }
    return "none";
}

Embedding align_affine(const Embedding& source, const Embedding& target, const std::vector<std::size_t>& fit_rows) {
    const std::size_t d = source.dim();
    if (target.dim() != d || target.size() != source.size())
        throw DimensionError("align_affine: embeddings differ in shape");
    if (fit_rows.size() < d + 1) throw ArgumentError("align_affine: need at least d + 1 fitting rows");
    Eigen::MatrixXd x(fit_rows.size(), d + 1);
    Eigen::MatrixXd y(fit_rows.size(), d);
    for (std::size_t r = 0; r < fit_rows.size(); ++r) {
        const auto i = fit_rows[r];
        for (std::size_t t = 0; t < d; ++t) {
            x(r, t) = source.coords(i, t);
            y(r, t) = target.coords(i, t);
        }
        x(r, d) = 1.0;
    }
    const Eigen::MatrixXd map = x.colPivHouseholderQr().solve(y);
    Embedding out = source;
    for (std::size_t i = 0; i < source.size(); ++i)
        for (std::size_t t = 0; t < d; ++t) {
            double v = map(d, t);
            for (std::size_t u = 0; u < d; ++u) v += source.coords(i, u) * map(u, t);
            out.coords(i, t) = v;
        }
    return out;
}

std::string OosReport::to_text() const {
    std::ostringstream o;
    o << "out-of-sample protocol\n"
      << "  sequences          " << n_total << '\n'
      << "  trained on         " << n_train << '\n'
      << "  held out           " << n_heldout << " (fraction " << options.holdout << ")\n"
      << "  reference panel    K=" << panel_size << " seed=" << panel_seed << '\n'
      << "  network            " << spec.input_dim << " -> " << format_layer_list(spec.encoder_hidden)
      << " (leaky slope " << spec.leaky_slope << ")\n"
      << "  training           epochs=" << train.epochs << " batch=" << train.batch_size
      << " lr=" << train.learning_rate << " optimizer=" << (train.optimizer == OptimizerKind::adam ? "adam" : "sgd")
      << " init_seed=" << train.init_seed << " shuffle_seed=" << train.shuffle_seed << '\n'
      << "  kmeans             k=" << options.k << " seed=" << options.kmeans_seed
      << " max_iter=" << options.kmeans_max_iter << " tol=" << options.kmeans_tol << '\n'
      << "  holdout seed       " << options.holdout_seed << '\n'
      << "  centroid frame     " << to_string(options.frame) << '\n'
      << "  final loss         baseline=" << baseline_final_loss << " retrained=" << retrained_final_loss << '\n'
      << "  incorrect          " << result.mismatches << '/' << result.total << '\n'
      << "  accuracy           " << format_percent(result.accuracy) << '\n';
    return o.str();
}

} // namespace seqae
