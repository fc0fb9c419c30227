#include <doctest.h>

#include <numeric>
#include <set>

#include "oracles.hpp"
#include "seqae/alignment.hpp"
#include "seqae/clustering_eval.hpp"
#include "seqae/error.hpp"

using namespace seqae;

namespace {
Embedding make(const oracle::Points& pts) {
    Embedding e;
    e.coords = Matrix<double>(pts.size(), pts.empty() ? 0 : pts[0].size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        e.ids.push_back("p" + std::to_string(i));
        for (std::size_t c = 0; c < pts[i].size(); ++c) e.coords(i, c) = pts[i][c];
    }
    return e;
}

oracle::Points random_points(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, scale);
    oracle::Points p(n, std::vector<double>(d));
    for (auto& row : p)
        for (auto& v : row) v = u(g);
    return p;
}

ClusterLabels labels_of(const Embedding& e, std::vector<int> l, std::size_t k) {
    return ClusterLabels{e.ids, std::move(l), k};
}
} // namespace

TEST_CASE("kmeans: four-point example matches the exhaustive optimum") {
    auto e = make({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    // Best of all 2-partitions by within-cluster squared error.
    double best = INFINITY;
    for (int mask = 1; mask < 15; ++mask) {
        double sse = 0;
        for (int side = 0; side < 2; ++side) {
            double cx = 0, cy = 0;
            int n = 0;
            for (int i = 0; i < 4; ++i)
                if (((mask >> i) & 1) == side) cx += e.coords(i, 0), cy += e.coords(i, 1), ++n;
            cx /= n, cy /= n;
            for (int i = 0; i < 4; ++i)
                if (((mask >> i) & 1) == side)
                    sse += std::pow(e.coords(i, 0) - cx, 2) + std::pow(e.coords(i, 1) - cy, 2);
        }
        best = std::min(best, sse);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        KMeansOptions o;
        o.k = 2;
        o.rng_seed = seed;
        auto r = kmeans(e, o);
        CHECK(r.objective.back() == doctest::Approx(best));
        CHECK(r.labels.labels[0] == r.labels.labels[1]);
        CHECK(r.labels.labels[2] == r.labels.labels[3]);
        CHECK(r.labels.labels[0] != r.labels.labels[2]);
        auto c = r.labels.labels[0];
        CHECK(r.centroids(c, 0) == 0.0);
        CHECK(r.centroids(c, 1) == 0.5);
        CHECK(r.centroids(1 - c, 0) == 10.0);
    }
}

TEST_CASE("kmeans: k == N puts every point alone") {
    auto e = make(random_points(6, 3, 1));
    KMeansOptions o;
    o.k = 6;
    auto r = kmeans(e, o);
    std::set<int> seen(r.labels.labels.begin(), r.labels.labels.end());
    CHECK(seen.size() == 6);
    CHECK(r.objective.back() == 0.0);
    o.k = 7;
    CHECK_THROWS_AS(kmeans(e, o), ArgumentError);
}

TEST_CASE("kmeans: objective never increases and fixed init is respected") {
    auto e = make(random_points(200, 3, 2));
    KMeansOptions o;
    o.k = 5;
    o.rng_seed = 3;
    auto r = kmeans(e, o);
    for (std::size_t i = 1; i < r.objective.size(); ++i) CHECK(r.objective[i] <= r.objective[i - 1] + 1e-12);
    CHECK(kmeans(e, o).labels == r.labels);

    KMeansOptions fixed;
    fixed.k = 5;
    fixed.initial = r.centroids;
    auto again = kmeans(e, fixed);
    CHECK(again.labels == r.labels);
    CHECK(again.iterations <= 2);
    fixed.initial = Centroids(4, 3);
    CHECK_THROWS_AS(kmeans(e, fixed), DimensionError);
}

TEST_CASE("silhouette: two tight far clusters approach 1") {
    oracle::Points p;
    for (int i = 0; i < 10; ++i) p.push_back({0.001 * i, 0});
    for (int i = 0; i < 10; ++i) p.push_back({100 + 0.001 * i, 0});
    auto e = make(p);
    std::vector<int> l(20, 0);
    std::fill(l.begin() + 10, l.end(), 1);
    CHECK(silhouette(e, labels_of(e, l, 2)).mean > 0.95);
}

TEST_CASE("silhouette: identical points give zero") {
    auto e = make(oracle::Points(6, {1.0, 2.0}));
    auto s = silhouette(e, labels_of(e, {0, 1, 0, 1, 0, 1}, 2));
    CHECK(s.mean == 0.0);
    for (double v : s.per_point) CHECK(v == 0.0);
}

TEST_CASE("silhouette: brute-force oracle, singletons and permutation invariance") {
    auto p = random_points(100, 3, 4);
    auto e = make(p);
    std::mt19937_64 g(5);
    std::vector<int> l(100);
    for (auto& v : l) v = int(g() % 4);
    l[17] = 4;  // singleton cluster
    auto s = silhouette(e, labels_of(e, l, 5));
    CHECK(std::abs(s.mean - oracle::silhouette_mean(p, l)) <= 1e-12);
    CHECK(s.per_point[17] == 0.0);

    std::vector<int> perm{3, 0, 4, 1, 2};
    auto pl = l;
    for (auto& v : pl) v = perm[v];
    CHECK(silhouette(e, labels_of(e, pl, 5)).mean == s.mean);
    CHECK_THROWS_AS(silhouette(e, labels_of(e, std::vector<int>(100, 0), 2)), ArgumentError);
}

TEST_CASE("pearson: exact isometry and independence") {
    auto p = random_points(60, 3, 6);
    auto e = make(p);
    auto iso = [&](std::size_t i, std::size_t j) { return oracle::euclid(p[i], p[j]); };
    CHECK(distance_heatmap(iso, e, 10000, 20, 1).pearson == doctest::Approx(1.0).epsilon(1e-9));

    auto q = random_points(60, 3, 7);
    auto indep = [&](std::size_t i, std::size_t j) { return oracle::euclid(q[i], q[j]); };
    CHECK(std::abs(distance_heatmap(indep, make(random_points(60, 3, 8)), 10000, 20, 2).pearson) < 0.1);
    CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("heatmap: counts sum to pairs, sampling is seeded") {
    auto p = random_points(40, 3, 9);
    auto e = make(p);
    auto f = [&](std::size_t i, std::size_t j) { return std::min(1.0, oracle::euclid(p[i], p[j])); };
    auto a = distance_heatmap(f, e, 5000, 30, 3);
    CHECK(a.counts.size() == 900);
    CHECK(std::accumulate(a.counts.begin(), a.counts.end(), std::uint64_t(0)) == 5000);
    CHECK(a.pairs == 5000);
    auto b = distance_heatmap(f, e, 5000, 30, 3);
    CHECK(a.counts == b.counts);
    CHECK(a.pearson == b.pearson);
}

TEST_CASE("heatmap: exhaustive grid covers every unordered pair") {
    auto p = random_points(25, 2, 10);
    auto e = make(p);
    auto f = [&](std::size_t i, std::size_t j) { return oracle::euclid(p[i], p[j]) / 2.0; };
    auto g = distance_heatmap_exhaustive(f, e, 10);
    CHECK(g.pairs == 25 * 24 / 2);
    CHECK(std::accumulate(g.counts.begin(), g.counts.end(), std::uint64_t(0)) == g.pairs);
    CHECK(g.pearson == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("heatmap: from a distance matrix and from sequences agree") {
    SynthParams sp{3, 10, 40, 0.1, 3};
    auto ds = synth_dataset(sp);
    auto e = make(random_points(30, 3, 11));
    e.ids = ds.set.ids();
    auto d = pairwise_matrix(ds.set, ScoringScheme{});
    auto from_matrix = distance_heatmap(d, e, 2000, 10, 4);
    auto from_set = distance_heatmap(ds.set, ScoringScheme{}, e, 2000, 10, 4);
    // The matrix stores single precision, so a pair may land in a neighbouring bin.
    std::uint64_t moved = 0;
    for (std::size_t i = 0; i < from_matrix.counts.size(); ++i)
        moved += std::max(from_matrix.counts[i], from_set.counts[i]) - std::min(from_matrix.counts[i], from_set.counts[i]);
    CHECK(moved <= 20);
    CHECK(from_matrix.pairs == from_set.pairs);
    CHECK(from_matrix.pearson == doctest::Approx(from_set.pearson).epsilon(1e-6));
}

TEST_CASE("oos accuracy: golden percentages") {
    CHECK(format_percent(1.0 - 17.0 / 4000) == "99.57%");
    CHECK(format_percent(1.0 - 17.0 / 8000) == "99.78%");
    CHECK(format_percent(1.0) == "100.00%");

    std::vector<std::string> ids;
    std::vector<int> base, oos;
    for (int i = 0; i < 4000; ++i) {
        ids.push_back("h" + std::to_string(i));
        base.push_back(i % 5);
        oos.push_back(i < 17 ? (i + 1) % 5 : i % 5);
    }
    auto r = oos_accuracy({ids, base, 5}, {ids, oos, 5}, ids);
    CHECK(r.mismatches == 17);
    CHECK(r.total == 4000);
    CHECK(r.accuracy == doctest::Approx(0.99575));
    CHECK(format_percent(r.accuracy) == "99.57%");
    CHECK(r.mismatched_ids.size() == 17);
    CHECK(oos_accuracy({ids, base, 5}, {ids, base, 5}, ids).accuracy == 1.0);
    CHECK_THROWS_AS(oos_accuracy({ids, base, 5}, {ids, base, 5}, {"nope"}), LookupError);
}

TEST_CASE("align_affine: recovers an affine map from the fitting rows") {
    auto p = random_points(50, 3, 12);
    auto src = make(p);
    auto dst = src;
    for (std::size_t i = 0; i < 50; ++i) {
        double x = p[i][0], y = p[i][1], z = p[i][2];
        dst.coords(i, 0) = 2 * x - y + 0.5;
        dst.coords(i, 1) = 0.3 * z + y - 1.0;
        dst.coords(i, 2) = -x + 4 * z;
    }
    std::vector<std::size_t> fit;
    for (std::size_t i = 0; i < 40; ++i) fit.push_back(i);
    auto out = align_affine(src, dst, fit);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t c = 0; c < 3; ++c) CHECK(out.coords(i, c) == doctest::Approx(dst.coords(i, c)).epsilon(1e-9));
    CHECK_THROWS_AS(align_affine(src, dst, {0, 1, 2}), ArgumentError);
}

TEST_CASE("transfer_centroids: per-label means over the chosen rows") {
    auto e = make({{0, 0}, {2, 0}, {10, 10}, {12, 10}, {100, 100}});
    auto c = transfer_centroids(e, {0, 0, 1, 1, 1}, 2, {0, 1, 2, 3});
    CHECK(c(0, 0) == 1.0);
    CHECK(c(0, 1) == 0.0);
    CHECK(c(1, 0) == 11.0);
    CHECK(c(1, 1) == 10.0);
    CHECK_THROWS_AS(transfer_centroids(e, {0, 0, 0, 0, 1}, 2, {0, 1, 2, 3}), ArgumentError);
    CHECK_THROWS_AS(transfer_centroids(e, {0, 1}, 2, {0, 1}), DimensionError);
}

TEST_CASE("oos frame names round trip") {
    for (auto f : {OosFrame::none, OosFrame::affine, OosFrame::transfer}) CHECK(parse_oos_frame(to_string(f)) == f);
    CHECK_THROWS_AS(parse_oos_frame("rigid"), ConfigError);
}
