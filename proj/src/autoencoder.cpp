#include "seqae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <zlib.h>

#include "seqae/error.hpp"
#include "seqae/matrix_io.hpp"
#include "seqae/rng.hpp"

namespace seqae {

std::string to_string(Activation a) {
    switch (a) {
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::linear: return "linear";
    case Activation::sigmoid: return "sigmoid";
    }
    return "?";
}

void NetworkSpec::validate() const {
    if (input_dim < 1) throw ConfigError("network input_dim must be >= 1");
    if (encoder_hidden.empty()) throw ConfigError("network needs at least a bottleneck layer");
    for (auto w : encoder_hidden)
        if (w < 1) throw ConfigError("network layer widths must be >= 1");
    if (!(leaky_slope >= 0.0 && leaky_slope < 1.0)) throw ConfigError("leaky slope must lie in [0, 1)");
}

std::vector<std::size_t> NetworkSpec::widths() const {
    std::vector<std::size_t> w{input_dim};
    w.insert(w.end(), encoder_hidden.begin(), encoder_hidden.end());
    for (std::size_t i = encoder_hidden.size() - 1; i-- > 0;) w.push_back(encoder_hidden[i]);
    w.push_back(input_dim);
    return w;
}

Activation NetworkSpec::activation(std::size_t layer) const {
    const std::size_t n = layer_count();
    if (layer + 1 == n) return output == OutputHead::sigmoid ? Activation::sigmoid : Activation::linear;
    if (layer + 1 == encoder_hidden.size()) return Activation::leaky_relu;
    return Activation::relu;
}

std::vector<std::size_t> parse_layer_list(const std::string& text) {
    std::vector<std::size_t> out;
    if (!text.empty() && text.back() == 'x') throw ConfigError("bad layer list '" + text + "' (expected e.g. 128x3)");
    std::istringstream in(text);
    for (std::string tok; std::getline(in, tok, 'x');) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(tok, &pos);
            if (pos != tok.size() || v < 1) throw std::invalid_argument(tok);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw ConfigError("bad layer list '" + text + "' (expected e.g. 128x3)");
        }
    }
    if (out.empty()) throw ConfigError("empty layer list");
    return out;
}

std::string format_layer_list(const std::vector<std::size_t>& widths) {
    std::string s;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(widths[i]);
    }
    return s;
}

std::size_t ModelWeights::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
}

ModelWeights init_weights(const NetworkSpec& spec, std::uint64_t rng_seed) {
    spec.validate();
    ModelWeights w;
    w.spec = spec;
    w.rng_seed = rng_seed;
    Rng rng(rng_seed);
    const auto widths = spec.widths();
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Layer layer;
        layer.in = widths[l];
        layer.out = widths[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.in));
        layer.weight.resize(layer.in * layer.out);
        for (auto& v : layer.weight) v = rng.uniform(-bound, bound);
        layer.bias.assign(layer.out, 0.0);
        w.layers.push_back(std::move(layer));
    }
    return w;
}

namespace {

// z = x W^T + b
Matrix<double> affine(const Layer& layer, const Matrix<double>& x) {
    Matrix<double> z(x.rows(), layer.out);
    for (std::size_t b = 0; b < x.rows(); ++b) {
        const double* xr = x.row(b).data();
        double* zr = z.row(b).data();
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double* wr = layer.weight.data() + o * layer.in;
            double acc = layer.bias[o];
            for (std::size_t i = 0; i < layer.in; ++i) acc += wr[i] * xr[i];
            zr[o] = acc;
        }
    }
    return z;
}

void activate(Matrix<double>& z, Activation a, double slope, std::size_t layer) {
    for (auto& v : z.data()) {
        switch (a) {
        case Activation::relu: v = v > 0.0 ? v : 0.0; break;
        case Activation::leaky_relu: v = v > 0.0 ? v : slope * v; break;
        case Activation::linear: break;
        case Activation::sigmoid: v = 1.0 / (1.0 + std::exp(-v)); break;
        }
        if (!std::isfinite(v)) throw NumericError("non-finite activation", layer);
    }
}

// d activation / d z, expressed through the pre-activation z and output h
double activation_slope(Activation a, double z, double h, double slope) {
    switch (a) {
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::leaky_relu: return z > 0.0 ? 1.0 : slope;
    case Activation::linear: return 1.0;
    case Activation::sigmoid: return h * (1.0 - h);
    }
    return 1.0;
}

void check_input(const ModelWeights& w, const Matrix<double>& x) {
    if (x.cols() != w.spec.input_dim)
        throw DimensionError("input width " + std::to_string(x.cols()) + " does not match network input_dim " +
                             std::to_string(w.spec.input_dim));
}

// Runs layers [0, count) and keeps every pre-activation and activation.
struct Trace {
    std::vector<Matrix<double>> pre;   // z per layer
    std::vector<Matrix<double>> post;  // h per layer
};

Trace run_layers(const ModelWeights& w, const Matrix<double>& x, std::size_t count) {
    Trace t;
    const Matrix<double>* input = &x;
    for (std::size_t l = 0; l < count; ++l) {
        t.pre.push_back(affine(w.layers[l], *input));
        Matrix<double> h = t.pre.back();
        activate(h, w.spec.activation(l), w.spec.leaky_slope, l);
        t.post.push_back(std::move(h));
        input = &t.post.back();
    }
    return t;
}

} // namespace

ForwardResult forward(const ModelWeights& w, const Matrix<double>& x) {
    check_input(w, x);
    Trace t = run_layers(w, x, w.layers.size());
    ForwardResult r;
    r.bottleneck = std::move(t.post[w.spec.encoder_layer_count() - 1]);
    r.reconstruction = std::move(t.post.back());
    return r;
}

LossAndGrads loss_and_grads(const ModelWeights& w, const Matrix<double>& x) {
    check_input(w, x);
    const std::size_t L = w.layers.size();
    const Trace t = run_layers(w, x, L);
    const Matrix<double>& y = t.post.back();

    LossAndGrads out;
    const double scale = 1.0 / static_cast<double>(x.rows() * x.cols());
    Matrix<double> delta(y.rows(), y.cols());  // dLoss/dh of the current layer
    double sum = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double r = y.data()[k] - x.data()[k];
        sum += r * r;
        delta.data()[k] = 2.0 * r * scale;
    }
    out.loss = sum * scale;
    if (!std::isfinite(out.loss)) throw NumericError("non-finite loss", L - 1);

    out.grads.resize(L);
    for (std::size_t l = L; l-- > 0;) {
        const Layer& layer = w.layers[l];
        const Matrix<double>& z = t.pre[l];
        const Matrix<double>& h = t.post[l];
        const Matrix<double>& input = l == 0 ? x : t.post[l - 1];
        const Activation act = w.spec.activation(l);
        for (std::size_t k = 0; k < delta.size(); ++k)
            delta.data()[k] *= activation_slope(act, z.data()[k], h.data()[k], w.spec.leaky_slope);

        Layer& g = out.grads[l];
        g.in = layer.in;
        g.out = layer.out;
        g.weight.assign(layer.weight.size(), 0.0);
        g.bias.assign(layer.out, 0.0);
        for (std::size_t b = 0; b < delta.rows(); ++b) {
            const double* dr = delta.row(b).data();
            const double* xr = input.row(b).data();
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                g.bias[o] += d;
                double* gw = g.weight.data() + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) gw[i] += d * xr[i];
            }
        }
        if (l == 0) break;
        Matrix<double> prev(delta.rows(), layer.in, 0.0);
        for (std::size_t b = 0; b < delta.rows(); ++b) {
            const double* dr = delta.row(b).data();
            double* pr = prev.row(b).data();
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                const double* wr = layer.weight.data() + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) pr[i] += d * wr[i];
            }
        }
        delta = std::move(prev);
    }
    return out;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (optimizer == OptimizerKind::adam) {
        if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0))
            throw ConfigError("adam betas must lie in [0, 1)");
        if (!(epsilon > 0.0)) throw ConfigError("adam epsilon must be > 0");
    } else if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ConfigError("sgd momentum must lie in [0, 1)");
    }
}

namespace {

class Optimizer {
public:
    Optimizer(const TrainConfig& cfg, const ModelWeights& w) : cfg_(cfg) {
        for (const auto& l : w.layers) {
            m_.push_back(zeros_like(l));
            v_.push_back(zeros_like(l));
        }
    }

    void step(ModelWeights& w, const std::vector<Layer>& grads) {
        ++t_;
        for (std::size_t l = 0; l < w.layers.size(); ++l) {
            update(w.layers[l].weight, grads[l].weight, m_[l].weight, v_[l].weight);
            update(w.layers[l].bias, grads[l].bias, m_[l].bias, v_[l].bias);
        }
    }

private:
    static Layer zeros_like(const Layer& l) {
        Layer z;
        z.weight.assign(l.weight.size(), 0.0);
        z.bias.assign(l.bias.size(), 0.0);
        return z;
    }

    void update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                std::vector<double>& v) const {
        const double lr = cfg_.learning_rate;
        if (cfg_.optimizer == OptimizerKind::sgd) {
            for (std::size_t k = 0; k < p.size(); ++k) {
                m[k] = cfg_.momentum * m[k] + g[k];
                p[k] -= lr * m[k];
            }
            return;
        }
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g[k];
            v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g[k] * g[k];
            p[k] -= lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + cfg_.epsilon);
        }
    }

    TrainConfig cfg_;
    std::vector<Layer> m_;
    std::vector<Layer> v_;
    std::uint64_t t_ = 0;
};

} // namespace

Matrix<double> to_double(const Matrix<float>& m) {
    Matrix<double> out(m.rows(), m.cols());
    std::copy(m.data().begin(), m.data().end(), out.data().begin());
    return out;
}

TrainResult train(const EncodedDataset& data, const NetworkSpec& spec, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    if (data.dim() != spec.input_dim)
        throw DimensionError("encoded width " + std::to_string(data.dim()) + " does not match network input_dim " +
                             std::to_string(spec.input_dim));
    cfg.validate();
    return train(to_double(data.features), init_weights(spec, cfg.init_seed), cfg, on_epoch);
}

TrainResult train(const Matrix<double>& x, ModelWeights init, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    cfg.validate();
    check_input(init, x);
    if (x.rows() == 0) throw ArgumentError("cannot train on an empty dataset");

    TrainResult result;
    result.weights = std::move(init);
    Optimizer opt(cfg, result.weights);
    Rng rng(cfg.shuffle_seed);

    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double weighted = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t rows = std::min(cfg.batch_size, n - start);
            Matrix<double> batch(rows, d);
            for (std::size_t r = 0; r < rows; ++r) {
                auto src = x.row(order[start + r]);
                std::copy(src.begin(), src.end(), batch.row(r).begin());
            }
            LossAndGrads lg;
            try {
                lg = loss_and_grads(result.weights, batch);
            } catch (const NumericError& e) {
                throw TrainingError(std::string("training diverged: ") + e.what(), epoch);
            }
            opt.step(result.weights, lg.grads);
            ++result.updates;
            weighted += lg.loss * static_cast<double>(rows);
        }
        const double mean = weighted / static_cast<double>(n);
        if (!std::isfinite(mean)) throw TrainingError("training diverged: non-finite epoch loss", epoch);
        result.history.push_back(mean);
        if (on_epoch) on_epoch(epoch, mean);
    }
    return result;
}

Matrix<double> encode_rows(const ModelWeights& w, const Matrix<double>& x) {
    check_input(w, x);
    Trace t = run_layers(w, x, w.spec.encoder_layer_count());
    return std::move(t.post.back());
}

Embedding embed(const ModelWeights& w, const EncodedDataset& data) {
    if (data.dim() != w.spec.input_dim)
        throw DimensionError("encoded width " + std::to_string(data.dim()) + " does not match network input_dim " +
                             std::to_string(w.spec.input_dim));
    Embedding e;
    e.ids = data.ids;
    e.coords = Matrix<double>(data.size(), w.spec.bottleneck());
    constexpr std::size_t kChunk = 4096;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        const std::size_t rows = std::min(kChunk, data.size() - start);
        Matrix<double> x(rows, data.dim());
        for (std::size_t r = 0; r < rows; ++r) {
            auto src = data.features.row(start + r);
            std::copy(src.begin(), src.end(), x.row(r).begin());
        }
        const auto z = encode_rows(w, x);
        std::copy(z.data().begin(), z.data().end(), e.coords.row(start).begin());
    }
    return e;
}

// --- model file ------------------------------------------------------------

namespace {

constexpr char kModelMagic[4] = {'A', 'E', 'M', 'D'};

} // namespace

void save_model(std::ostream& out, const ModelWeights& w) {
    std::ostringstream buf(std::ios::binary);
    buf.write(kModelMagic, 4);
    put_u32(buf, kModelVersion);
    put_u32(buf, sizeof(double));
    put_u64(buf, w.spec.input_dim);
    put_u32(buf, static_cast<std::uint32_t>(w.spec.encoder_hidden.size()));
    for (auto width : w.spec.encoder_hidden) put_u64(buf, width);
    put_f64(buf, w.spec.leaky_slope);
    put_u32(buf, static_cast<std::uint32_t>(w.spec.output));
    put_u32(buf, static_cast<std::uint32_t>(w.layers.size()));
    for (std::size_t l = 0; l < w.layers.size(); ++l)
        put_u32(buf, static_cast<std::uint32_t>(w.spec.activation(l)));
    put_u64(buf, w.rng_seed);
    for (const auto& layer : w.layers) {
        for (double v : layer.weight) put_f64(buf, v);
        for (double v : layer.bias) put_f64(buf, v);
    }
    const std::string bytes = buf.str();
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

std::string save_model_bytes(const ModelWeights& w) {
    std::ostringstream out(std::ios::binary);
    save_model(out, w);
    return out.str();
}

void save_model(const std::string& path, const ModelWeights& w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model '" + path + "'");
    save_model(out, w);
}

ModelWeights load_model_bytes(std::string_view bytes) {
    if (bytes.size() < 4 + 4 || bytes.substr(0, 4) != std::string_view(kModelMagic, 4))
        throw FormatError("not an AEMD model file (bad magic)");
    const std::string_view body = bytes.substr(0, bytes.size() - 4);
    std::istringstream trailer(std::string(bytes.substr(bytes.size() - 4)));
    const auto stored = get_u32(trailer);

    std::istringstream in{std::string(body)};
    in.ignore(4);
    const auto version = get_u32(in);
    if (version != kModelVersion)
        throw FormatError("unsupported model version " + std::to_string(version));
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    if (static_cast<std::uint32_t>(crc) != stored) throw FormatError("model checksum mismatch");
    if (get_u32(in) != sizeof(double)) throw FormatError("unsupported model value width");

    ModelWeights w;
    w.spec.input_dim = get_u64(in);
    const auto enc = get_u32(in);
    if (enc == 0 || enc > 64) throw FormatError("bad encoder layer count");
    w.spec.encoder_hidden.clear();
    for (std::uint32_t i = 0; i < enc; ++i) w.spec.encoder_hidden.push_back(get_u64(in));
    w.spec.leaky_slope = get_f64(in);
    const auto head = get_u32(in);
    if (head > 1) throw FormatError("bad output head tag");
    w.spec.output = static_cast<OutputHead>(head);
    try {
        w.spec.validate();
    } catch (const ConfigError& e) {
        throw FormatError(std::string("bad network spec: ") + e.what());
    }
    const auto layers = get_u32(in);
    if (layers != w.spec.layer_count()) throw FormatError("layer count does not match the network spec");
    for (std::uint32_t l = 0; l < layers; ++l)
        if (get_u32(in) != static_cast<std::uint32_t>(w.spec.activation(l)))
            throw FormatError("activation tag does not match the network spec");
    w.rng_seed = get_u64(in);
    const auto widths = w.spec.widths();
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Layer layer;
        layer.in = widths[l];
        layer.out = widths[l + 1];
        layer.weight.resize(layer.in * layer.out);
        layer.bias.resize(layer.out);
        for (auto& v : layer.weight) v = get_f64(in);
        for (auto& v : layer.bias) v = get_f64(in);
        w.layers.push_back(std::move(layer));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in model file");
    return w;
}

ModelWeights load_model(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model_bytes(buf.str());
}

ModelWeights load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model '" + path + "'");
    try {
        return load_model(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

} // namespace seqae
