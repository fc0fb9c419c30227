#pragma once
// Test helpers that need the library types.

#include <algorithm>
#include <cmath>
#include <random>

#include "seqae/autoencoder.hpp"

namespace support {

struct GradCheck {
    double max_rel = 0.0;
    std::size_t checked = 0;
};

// Central differences on every weight and bias. Relative error is
// |analytic - numeric| / max(|analytic|, |numeric|, floor).
inline GradCheck finite_difference_check(const seqae::ModelWeights& w, const seqae::Matrix<double>& x,
                                         double step = 1e-5, double floor = 1e-6) {
    GradCheck out;
    const auto analytic = seqae::loss_and_grads(w, x).grads;
    auto probe = w;
    auto compare = [&](double a, double& param) {
        const double saved = param;
        param = saved + step;
        const double up = seqae::loss_and_grads(probe, x).loss;
        param = saved - step;
        const double down = seqae::loss_and_grads(probe, x).loss;
        param = saved;
        const double numeric = (up - down) / (2 * step);
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
        out.max_rel = std::max(out.max_rel, rel);
        ++out.checked;
    };
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        for (std::size_t i = 0; i < probe.layers[l].weight.size(); ++i)
            compare(analytic[l].weight[i], probe.layers[l].weight[i]);
        for (std::size_t i = 0; i < probe.layers[l].bias.size(); ++i)
            compare(analytic[l].bias[i], probe.layers[l].bias[i]);
    }
    return out;
}

inline seqae::Matrix<double> random_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    seqae::Matrix<double> x(n, d);
    for (auto& v : x.data()) v = u(g);
    return x;
}

// Nonzero biases keep pre-activations away from the ReLU kink at 0.
inline seqae::ModelWeights random_net(std::size_t d, std::vector<std::size_t> enc, std::uint64_t seed) {
    seqae::NetworkSpec spec;
    spec.input_dim = d;
    spec.encoder_hidden = std::move(enc);
    auto w = seqae::init_weights(spec, seed);
    std::mt19937_64 g(seed + 1);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (auto& l : w.layers)
        for (auto& b : l.bias) b = u(g);
    return w;
}

} // namespace support
