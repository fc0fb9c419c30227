#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "seqae/encoding.hpp"
#include "seqae/matrix.hpp"

namespace seqae {

enum class Activation : std::uint32_t { relu = 0, leaky_relu = 1, linear = 2, sigmoid = 3 };

enum class OutputHead : std::uint32_t { linear = 0, sigmoid = 1 };

std::string to_string(Activation a);

/// Fully connected autoencoder layout.
///
/// `encoder_hidden` lists the encoder widths and ends with the bottleneck, so
/// {128, 3} yields the layer chain D -> 128 -> 3 -> 128 -> D. Hidden layers use
/// ReLU, the bottleneck a leaky ReLU, and the output layer is linear unless a
/// sigmoid head is requested.
struct NetworkSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> encoder_hidden{128, 3};
    double leaky_slope = 0.01;
    OutputHead output = OutputHead::linear;

    /// Throws ConfigError for zero widths, an empty encoder, or a bad slope.
    void validate() const;

    std::size_t bottleneck() const { return encoder_hidden.back(); }
    std::size_t layer_count() const { return 2 * encoder_hidden.size(); }
    std::size_t encoder_layer_count() const { return encoder_hidden.size(); }
    /// D, encoder widths, mirrored decoder widths, D.
    std::vector<std::size_t> widths() const;
    Activation activation(std::size_t layer) const;

    bool operator==(const NetworkSpec&) const = default;
};

/// Parses "128x3" or "256x32x3" into encoder widths.
std::vector<std::size_t> parse_layer_list(const std::string& text);
std::string format_layer_list(const std::vector<std::size_t>& widths);

struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weight;  ///< out x in, row-major
    std::vector<double> bias;    ///< out

    bool operator==(const Layer&) const = default;
};

struct ModelWeights {
    NetworkSpec spec;
    std::uint64_t rng_seed = 0;
    std::vector<Layer> layers;

    std::size_t parameter_count() const;
    bool operator==(const ModelWeights&) const = default;
};

/// Weights uniform in [-sqrt(6/fan_in), sqrt(6/fan_in)], biases zero.
ModelWeights init_weights(const NetworkSpec& spec, std::uint64_t rng_seed);

struct ForwardResult {
    Matrix<double> reconstruction;
    Matrix<double> bottleneck;
};

/// Throws DimensionError when x.cols() != input_dim and NumericError (with the
/// layer index) when an activation is not finite.
ForwardResult forward(const ModelWeights& w, const Matrix<double>& x);

struct LossAndGrads {
    double loss = 0.0;
    std::vector<Layer> grads;  ///< same shapes as ModelWeights::layers
};

/// Mean squared reconstruction error over all entries of the batch, with the
/// exact gradient for every weight and bias.
LossAndGrads loss_and_grads(const ModelWeights& w, const Matrix<double>& x);

enum class OptimizerKind { adam, sgd };

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 256;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double momentum = 0.9;  ///< sgd only
    std::uint64_t shuffle_seed = 0;
    std::uint64_t init_seed = 0;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

struct TrainResult {
    ModelWeights weights;
    std::vector<double> history;  ///< mean per-entry loss of each epoch
    std::size_t updates = 0;
};

/// Mini-batch training from init_weights(spec, cfg.init_seed). Throws
/// TrainingError with the epoch when the loss stops being finite.
using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

TrainResult train(const EncodedDataset& data, const NetworkSpec& spec, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});
TrainResult train(const Matrix<double>& x, ModelWeights init, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

struct Embedding {
    std::vector<std::string> ids;
    Matrix<double> coords;  ///< N x d

    std::size_t size() const noexcept { return coords.rows(); }
    std::size_t dim() const noexcept { return coords.cols(); }
    bool operator==(const Embedding&) const = default;
};

/// Encoder-only pass. Serves in-sample and out-of-sample rows alike.
Embedding embed(const ModelWeights& w, const EncodedDataset& data);
Matrix<double> encode_rows(const ModelWeights& w, const Matrix<double>& x);

Matrix<double> to_double(const Matrix<float>& m);

// Model file: "AEMD" | u32 version | u32 value bytes (8) | spec block |
// u64 seed | per-layer f64 weights then biases | u32 CRC-32 of everything before.
constexpr std::uint32_t kModelVersion = 1;

void save_model(std::ostream& out, const ModelWeights& w);
void save_model(const std::string& path, const ModelWeights& w);
std::string save_model_bytes(const ModelWeights& w);
/// Throws FormatError on bad magic, version, checksum, or truncation.
ModelWeights load_model(std::istream& in);
ModelWeights load_model(const std::string& path);
ModelWeights load_model_bytes(std::string_view bytes);

} // namespace seqae
