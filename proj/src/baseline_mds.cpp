#include "seqae/baseline_mds.hpp"

#include <cmath>
#include <string>

#include "seqae/error.hpp"
#include "seqae/rng.hpp"

namespace seqae {

void MdsConfig::validate() const {
    if (target_dim < 1) throw ConfigError("MDS target_dim must be >= 1");
    if (!(eps > 0.0)) throw ConfigError("MDS eps must be > 0");
}

double stress(const Matrix<double>& x, const DistanceMatrix& d_in) {
    const std::size_t n = x.rows();
    if (d_in.rows() != n || d_in.cols() != n)
        throw DimensionError("stress: distance matrix is " + std::to_string(d_in.rows()) + " x " +
                             std::to_string(d_in.cols()) + " but the embedding has " + std::to_string(n) +
                             " points");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t t = 0; t < x.cols(); ++t) {
                const double diff = x(i, t) - x(j, t);
                d2 += diff * diff;
            }
            const double r = static_cast<double>(d_in(i, j)) - std::sqrt(d2);
            s += r * r;
        }
    return s;
}

double stress(const Embedding& emb, const DistanceMatrix& d_in) { return stress(emb.coords, d_in); }

SmacofResult smacof(const DistanceMatrix& d_in, const MdsConfig& cfg, std::vector<std::string> ids) {
    cfg.validate();
    const std::size_t n = d_in.rows();
    if (n == 0 || d_in.cols() != n) throw ValidationError("smacof needs a square distance matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (d_in(i, i) != 0.0f) throw ValidationError("smacof: distance matrix diagonal must be zero");
        for (std::size_t j = 0; j < i; ++j)
            if (d_in(i, j) != d_in(j, i))
                throw ValidationError("smacof: distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
    }
    if (ids.empty())
        for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    if (ids.size() != n) throw DimensionError("smacof: id count does not match the matrix");

    const std::size_t d = cfg.target_dim;
    Rng rng(cfg.rng_seed);
    Matrix<double> x(n, d);
    for (auto& v : x.data()) v = rng.uniform(-0.5, 0.5);

    SmacofResult r;
    double sigma = stress(x, d_in);
    r.stress_history.push_back(sigma);

    Matrix<double> next(n, d);
    std::vector<double> b_row(n);
    for (std::size_t it = 0; it < cfg.max_iter && sigma > 0.0; ++it) {
        // X <- (1/n) B(X) X
        for (std::size_t i = 0; i < n; ++i) {
            double diag = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    b_row[j] = 0.0;
                    continue;
                }
                double d2 = 0.0;
                for (std::size_t t = 0; t < d; ++t) {
                    const double diff = x(i, t) - x(j, t);
                    d2 += diff * diff;
                }
                const double dist = std::sqrt(d2);
                // coincident points contribute nothing
                b_row[j] = dist > 0.0 ? -static_cast<double>(d_in(i, j)) / dist : 0.0;
                diag -= b_row[j];
            }
            b_row[i] = diag;
            for (std::size_t t = 0; t < d; ++t) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += b_row[j] * x(j, t);
                next(i, t) = acc / static_cast<double>(n);
            }
        }
        const double prev = sigma;
        const double candidate = stress(next, d_in);
        // A rise can only come from rounding once converged; keep the previous iterate.
        if (candidate > prev) break;
        std::swap(x, next);
        sigma = candidate;
        r.stress_history.push_back(sigma);
        ++r.iterations;
        if ((prev - sigma) / prev < cfg.eps) break;
    }
    r.embedding.ids = std::move(ids);
    r.embedding.coords = std::move(x);
    return r;
}

} // namespace seqae
