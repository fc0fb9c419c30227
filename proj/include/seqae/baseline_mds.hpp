#pragma once

#include <cstdint>
#include <vector>

#include "seqae/alignment.hpp"
#include "seqae/autoencoder.hpp"

namespace seqae {

struct MdsConfig {
    std::size_t target_dim = 3;
    std::size_t max_iter = 1000;
    double eps = 1e-6;  ///< stop when the relative stress decrease drops below this
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Raw stress: sum over i < j of (delta_ij - ||x_i - x_j||)^2.
double stress(const Embedding& emb, const DistanceMatrix& d_in);
double stress(const Matrix<double>& x, const DistanceMatrix& d_in);

struct SmacofResult {
    Embedding embedding;
    /// history[0] is the stress of the random start, then one entry per
    /// Guttman transform.
    std::vector<double> stress_history;
    std::size_t iterations = 0;
};

/// Unweighted SMACOF from a uniform [-0.5, 0.5]^d start. `ids` label the
/// output rows (defaults to "0", "1", ...).
SmacofResult smacof(const DistanceMatrix& d_in, const MdsConfig& cfg, std::vector<std::string> ids = {});

} // namespace seqae
