#pragma once
// Brute-force reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Full (m+1)x(n+1) Smith-Waterman table, linear gaps.
inline std::int64_t sw_full_table(const std::string& a, const std::string& b, int match, int mismatch, int gap) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::vector<std::int64_t>> h(m + 1, std::vector<std::int64_t>(n + 1, 0));
    std::int64_t best = 0;
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            std::int64_t diag = h[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? match : mismatch);
            std::int64_t up = h[i - 1][j] + gap;
            std::int64_t left = h[i][j - 1] + gap;
            h[i][j] = std::max<std::int64_t>({0, diag, up, left});
            best = std::max(best, h[i][j]);
        }
    return best;
}

inline double sw_distance(const std::string& a, const std::string& b, int match = 2, int mismatch = -1,
                          int gap = -2) {
    double sab = static_cast<double>(sw_full_table(a, b, match, mismatch, gap));
    double saa = static_cast<double>(sw_full_table(a, a, match, mismatch, gap));
    double sbb = static_cast<double>(sw_full_table(b, b, match, mismatch, gap));
    return 1.0 - 2.0 * sab / (saa + sbb);
}

inline std::string random_dna(std::mt19937_64& g, std::size_t len) {
    static const char kBases[] = "ATGC";
    std::uniform_int_distribution<int> pick(0, 3);
    std::string s(len, 'A');
    for (auto& c : s) c = kBases[pick(g)];
    return s;
}

using Points = std::vector<std::vector<double>>;

inline double euclid(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0;
    for (std::size_t t = 0; t < p.size(); ++t) s += (p[t] - q[t]) * (p[t] - q[t]);
    return std::sqrt(s);
}

// Textbook silhouette with a double loop per point.
inline double silhouette_mean(const Points& x, const std::vector<int>& label) {
    const std::size_t n = x.size();
    int k = *std::max_element(label.begin(), label.end()) + 1;
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sum(k, 0.0);
        std::vector<int> cnt(k, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[label[j]] += euclid(x[i], x[j]);
            cnt[label[j]] += 1;
        }
        if (cnt[label[i]] == 0) continue;
        double a = sum[label[i]] / cnt[label[i]];
        double b = INFINITY;
        for (int c = 0; c < k; ++c)
            if (c != label[i] && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
        double s = std::max(a, b) == 0 ? 0.0 : (b - a) / std::max(a, b);
        total += s;
    }
    return total / static_cast<double>(n);
}

inline double raw_stress(const Points& x, const std::vector<std::vector<double>>& delta) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double r = delta[i][j] - euclid(x[i], x[j]);
            s += r * r;
        }
    return s;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace oracle
