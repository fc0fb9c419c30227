#include "seqae/clustering_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "seqae/error.hpp"
#include "seqae/rng.hpp"

namespace seqae {

void ClusterLabels::validate() const {
    if (ids.size() != labels.size()) throw ValidationError("cluster labels and ids differ in length");
    for (int l : labels)
        if (l < 0 || static_cast<std::size_t>(l) >= k)
            throw ValidationError("cluster label " + std::to_string(l) + " outside [0, " + std::to_string(k) + ")");
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double d = a[t] - b[t];
        s += d * d;
    }
    return s;
}

double dist(std::span<const double> a, std::span<const double> b) { return std::sqrt(sq_dist(a, b)); }

Centroids plus_plus_seeding(const Matrix<double>& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    Centroids c(k, x.cols());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t pick = static_cast<std::size_t>(rng.below(n));
    for (std::size_t m = 0; m < k; ++m) {
        std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(m).begin());
        if (m + 1 == k) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(x.row(i), c.row(m)));
            total += d2[i];
        }
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(rng.below(n));
            continue;
        }
        double r = rng.uniform01() * total;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            r -= d2[i];
            if (r < 0.0 && d2[i] > 0.0) {
                pick = i;
                break;
            }
        }
    }
    return c;
}

// Nearest center per point (ties go to the lower index); returns the objective.
double assign(const Matrix<double>& x, const Centroids& c, std::vector<int>& labels, std::vector<double>& d2) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (std::size_t m = 0; m < c.rows(); ++m) {
            const double d = sq_dist(x.row(i), c.row(m));
            if (d < best) {
                best = d;
                arg = static_cast<int>(m);
            }
        }
        labels[i] = arg;
        d2[i] = best;
        total += best;
    }
    return total;
}

// Moves the farthest point into each empty cluster. Returns the new objective.
double repair_empty(const Matrix<double>& x, Centroids& c, std::vector<int>& labels, std::vector<double>& d2,
                    double objective) {
    const std::size_t k = c.rows();
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (std::size_t m = 0; m < k; ++m) {
        if (sizes[m] != 0) continue;
        std::size_t far = x.rows();
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (sizes[static_cast<std::size_t>(labels[i])] < 2) continue;
            if (far == x.rows() || d2[i] > d2[far]) far = i;
        }
        if (far == x.rows()) break;  // fewer distinct donors than clusters
        --sizes[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(m);
        ++sizes[m];
        objective -= d2[far];
        d2[far] = 0.0;
        std::copy(x.row(far).begin(), x.row(far).end(), c.row(m).begin());
    }
    return objective;
}

} // namespace

KMeansResult kmeans(const Embedding& emb, const KMeansOptions& opts) {
    const Matrix<double>& x = emb.coords;
    const std::size_t n = x.rows();
    if (opts.k < 1 || opts.k > n)
        throw ArgumentError("kmeans: k=" + std::to_string(opts.k) + " must lie in [1, " + std::to_string(n) + "]");
    if (!(opts.tol >= 0.0)) throw ArgumentError("kmeans: tol must be >= 0");

    Centroids c;
    if (opts.initial) {
        if (opts.initial->rows() != opts.k || opts.initial->cols() != x.cols())
            throw DimensionError("kmeans: initial centroids must be k x d");
        c = *opts.initial;
    } else {
        Rng rng(opts.rng_seed);
        c = plus_plus_seeding(x, opts.k, rng);
    }

    KMeansResult r;
    std::vector<int> labels(n, 0);
    std::vector<double> d2(n, 0.0);
    for (std::size_t it = 0; it < std::max<std::size_t>(opts.max_iter, 1); ++it) {
        double obj = assign(x, c, labels, d2);
        obj = repair_empty(x, c, labels, d2, obj);
        r.objective.push_back(obj);
        ++r.iterations;

        Centroids next(opts.k, x.cols(), 0.0);
        std::vector<std::size_t> sizes(opts.k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto m = static_cast<std::size_t>(labels[i]);
            ++sizes[m];
            for (std::size_t t = 0; t < x.cols(); ++t) next(m, t) += x(i, t);
        }
        double movement = 0.0;
        for (std::size_t m = 0; m < opts.k; ++m) {
            if (sizes[m] == 0) {
                std::copy(c.row(m).begin(), c.row(m).end(), next.row(m).begin());
                continue;
            }
            for (std::size_t t = 0; t < x.cols(); ++t) next(m, t) /= static_cast<double>(sizes[m]);
            movement = std::max(movement, dist(next.row(m), c.row(m)));
        }
        c = std::move(next);
        if (movement <= opts.tol) break;
    }
    r.labels.ids = emb.ids;
    r.labels.labels = std::move(labels);
    r.labels.k = opts.k;
    r.centroids = std::move(c);
    return r;
}

Silhouette silhouette(const Embedding& emb, const ClusterLabels& labels) {
    if (labels.k < 2) throw ArgumentError("silhouette needs k >= 2");
    if (labels.labels.size() != emb.size()) throw DimensionError("silhouette: label count does not match embedding");
    labels.validate();
    const std::size_t n = emb.size();
    const std::size_t k = labels.k;
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels.labels) ++sizes[static_cast<std::size_t>(l)];
    if (std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }) < 2)
        throw ArgumentError("silhouette needs at least two nonempty clusters");

    Silhouette out;
    out.per_point.assign(n, 0.0);
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels.labels[i]);
        if (sizes[own] < 2) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sums[static_cast<std::size_t>(labels.labels[j])] += dist(emb.coords.row(i), emb.coords.row(j));
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        const double denom = std::max(a, b);
        out.per_point[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    double total = 0.0;
    for (double s : out.per_point) total += s;
    out.mean = total / static_cast<double>(n);
    return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

HeatmapGrid heatmap_from_pairs(const std::vector<double>& input, const std::vector<double>& embedded,
                               std::size_t bins) {
    if (bins < 2) throw ArgumentError("heatmap needs at least 2 bins");
    if (input.size() != embedded.size()) throw DimensionError("heatmap: pair vectors differ in length");
    HeatmapGrid g;
    g.bins = bins;
    g.counts.assign(bins * bins, 0);
    g.pairs = input.size();
    if (input.empty()) return g;
    const auto [lo, hi] = std::minmax_element(embedded.begin(), embedded.end());
    g.embedded_min = *lo;
    g.embedded_max = *hi;
    const double range = g.embedded_max - g.embedded_min;
    auto bin_of = [bins](double v) {
        const auto b = static_cast<long long>(std::floor(v * static_cast<double>(bins)));
        return static_cast<std::size_t>(std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1));
    };
    for (std::size_t p = 0; p < input.size(); ++p) {
        const double y = range > 0.0 ? (embedded[p] - g.embedded_min) / range : 0.0;
        ++g.counts[bin_of(input[p]) * bins + bin_of(y)];
    }
    g.pearson = pearson(input, embedded);
    return g;
}

HeatmapGrid distance_heatmap(const InputDistance& input, const Embedding& emb, std::size_t pairs,
                             std::size_t bins, std::uint64_t rng_seed) {
    const std::size_t n = emb.size();
    if (n < 2) throw ArgumentError("heatmap needs at least 2 points");
    if (pairs < 1) throw ArgumentError("heatmap needs at least 1 pair");
    if (bins < 2) throw ArgumentError("heatmap needs at least 2 bins");
    Rng rng(rng_seed);
    std::vector<double> xs, ys;
    xs.reserve(pairs);
    ys.reserve(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
        const auto i = static_cast<std::size_t>(rng.below(n));
        auto j = static_cast<std::size_t>(rng.below(n - 1));
        if (j >= i) ++j;
        xs.push_back(input(i, j));
        ys.push_back(dist(emb.coords.row(i), emb.coords.row(j)));
    }
    auto g = heatmap_from_pairs(xs, ys, bins);
    g.rng_seed = rng_seed;
    return g;
}

HeatmapGrid distance_heatmap(const DistanceMatrix& input, const Embedding& emb, std::size_t pairs,
                             std::size_t bins, std::uint64_t rng_seed) {
    if (input.rows() != emb.size() || input.cols() != emb.size())
        throw DimensionError("heatmap: distance matrix shape does not match the embedding");
    return distance_heatmap([&](std::size_t i, std::size_t j) { return static_cast<double>(input(i, j)); }, emb,
                            pairs, bins, rng_seed);
}

HeatmapGrid distance_heatmap(const SequenceSet& set, const ScoringScheme& scheme, const Embedding& emb,
                             std::size_t pairs, std::size_t bins, std::uint64_t rng_seed) {
    if (set.size() != emb.size()) throw DimensionError("heatmap: sequence count does not match the embedding");
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i].id != emb.ids[i]) throw ValidationError("heatmap: embedding ids are not in sequence order");
    return distance_heatmap(
        [&](std::size_t i, std::size_t j) { return sw_distance(set[i], set[j], scheme); }, emb, pairs, bins,
        rng_seed);
}

HeatmapGrid distance_heatmap_exhaustive(const InputDistance& input, const Embedding& emb, std::size_t bins) {
    const std::size_t n = emb.size();
    if (n < 2) throw ArgumentError("heatmap needs at least 2 points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            xs.push_back(input(i, j));
            ys.push_back(dist(emb.coords.row(i), emb.coords.row(j)));
        }
    return heatmap_from_pairs(xs, ys, bins);
}

OosAccuracy oos_accuracy(const ClusterLabels& baseline, const ClusterLabels& oos,
                         const std::vector<std::string>& heldout_ids) {
    if (heldout_ids.empty()) throw ArgumentError("oos_accuracy: no held-out ids");
    auto index = [](const ClusterLabels& l) {
        std::unordered_map<std::string, int> m;
        for (std::size_t i = 0; i < l.ids.size(); ++i) m.emplace(l.ids[i], l.labels.at(i));
        return m;
    };
    const auto base = index(baseline);
    const auto other = index(oos);
    OosAccuracy r;
    r.total = heldout_ids.size();
    for (const auto& id : heldout_ids) {
        auto a = base.find(id);
        auto b = other.find(id);
        if (a == base.end()) throw LookupError("held-out id '" + id + "' missing from the baseline labels");
        if (b == other.end()) throw LookupError("held-out id '" + id + "' missing from the out-of-sample labels");
        if (a->second != b->second) r.mismatched_ids.push_back(id);
    }
    std::sort(r.mismatched_ids.begin(), r.mismatched_ids.end());
    r.mismatches = r.mismatched_ids.size();
    r.accuracy = 1.0 - static_cast<double>(r.mismatches) / static_cast<double>(r.total);
    return r;
}

std::string format_percent(double fraction) {
    const auto hundredths = static_cast<long long>(std::floor(fraction * 10000.0 + 1e-9));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld%%", hundredths / 100, hundredths % 100);
    return buf;
}

} // namespace seqae
