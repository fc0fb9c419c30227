#include "seqae/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "seqae/error.hpp"
#include "seqae/matrix_io.hpp"
#include "seqae/rng.hpp"

namespace seqae {

namespace {

// Stream tags for seed derivation. Fixed forever: changing one changes every
// derived seed.
enum SeedStream : std::uint64_t {
    kSynth = 1, kPanel, kInit, kShuffle, kKmeans, kHeatmap, kHoldout, kMds
};

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        auto r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config " + key + ": '" + v + "' is not a non-negative integer");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        auto r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config " + key + ": '" + v + "' is not an integer");
    }
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        auto r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config " + key + ": '" + v + "' is not a number");
    }
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& v) {
    std::vector<std::size_t> out;
    std::istringstream in(v);
    for (std::string tok; std::getline(in, tok, ',');) out.push_back(parse_u64(key, tok));
    if (out.empty()) throw ConfigError("config " + key + ": empty list");
    return out;
}

std::string join_list(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

struct Field {
    const char* section;
    const char* key;
    std::function<std::optional<std::string>(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string& name, const std::string& value)> set;
};

template <typename T>
Field int_field(const char* s, const char* k, T PipelineConfig::*m) {
    return {s, k, [m](const PipelineConfig& c) { return std::optional<std::string>(std::to_string(c.*m)); },
            [m](PipelineConfig& c, const std::string& n, const std::string& v) {
                c.*m = static_cast<T>(parse_u64(n, v));
            }};
}

Field real_field(const char* s, const char* k, double PipelineConfig::*m) {
    return {s, k, [m](const PipelineConfig& c) { return std::optional<std::string>(format_exact(c.*m)); },
            [m](PipelineConfig& c, const std::string& n, const std::string& v) { c.*m = parse_real(n, v); }};
}

Field text_field(const char* s, const char* k, std::string PipelineConfig::*m) {
    return {s, k, [m](const PipelineConfig& c) { return std::optional<std::string>(c.*m); },
            [m](PipelineConfig& c, const std::string&, const std::string& v) { c.*m = v; }};
}

Field seed_field(const char* s, const char* k, std::optional<std::uint64_t> PipelineConfig::*m) {
    return {s, k,
            [m](const PipelineConfig& c) {
                return (c.*m) ? std::optional<std::string>(std::to_string(*(c.*m))) : std::nullopt;
            },
            [m](PipelineConfig& c, const std::string& n, const std::string& v) {
                if (v.empty()) c.*m = std::nullopt;
                else c.*m = parse_u64(n, v);
            }};
}

Field scheme_field(const char* k, int ScoringScheme::*m) {
    return {"scheme", k, [m](const PipelineConfig& c) { return std::optional<std::string>(std::to_string(c.scheme.*m)); },
            [m](PipelineConfig& c, const std::string& n, const std::string& v) { c.scheme.*m = parse_int(n, v); }};
}

const std::vector<Field>& fields() {
    using C = PipelineConfig;
    static const std::vector<Field> table = {
        int_field("general", "seed", &C::seed),
        int_field("general", "threads", &C::threads),
        text_field("general", "workdir", &C::workdir),

        text_field("data", "input", &C::input),
        text_field("data", "labels", &C::labels),
        text_field("data", "alphabet", &C::alphabet),

        scheme_field("match", &ScoringScheme::match),
        scheme_field("mismatch", &ScoringScheme::mismatch),
        scheme_field("gap", &ScoringScheme::gap),

        int_field("synth", "clusters", &C::synth_clusters),
        int_field("synth", "per_cluster", &C::synth_per_cluster),
        int_field("synth", "seed_len", &C::synth_seed_len),
        real_field("synth", "mutation_rate", &C::synth_mutation_rate),
        seed_field("synth", "seed", &C::synth_seed),

        {"encoding", "kind", [](const C& c) { return std::optional<std::string>(to_string(c.kind)); },
         [](C& c, const std::string&, const std::string& v) { c.kind = parse_encoding_kind(v); }},
        int_field("encoding", "refs", &C::refs),
        seed_field("encoding", "panel_seed", &C::panel_seed),
        int_field("encoding", "target_len", &C::target_len),
        text_field("encoding", "panel_pool", &C::panel_pool),

        {"network", "encoder", [](const C& c) { return std::optional<std::string>(format_layer_list(c.encoder)); },
         [](C& c, const std::string&, const std::string& v) { c.encoder = parse_layer_list(v); }},
        real_field("network", "leaky_slope", &C::leaky_slope),
        {"network", "output",
         [](const C& c) { return std::optional<std::string>(c.output == OutputHead::sigmoid ? "sigmoid" : "linear"); },
         [](C& c, const std::string& n, const std::string& v) {
             if (v == "linear") c.output = OutputHead::linear;
             else if (v == "sigmoid") c.output = OutputHead::sigmoid;
             else throw ConfigError("config " + n + ": expected linear or sigmoid");
         }},

        int_field("train", "epochs", &C::epochs),
        int_field("train", "batch_size", &C::batch_size),
        real_field("train", "learning_rate", &C::learning_rate),
        {"train", "optimizer",
         [](const C& c) { return std::optional<std::string>(c.optimizer == OptimizerKind::sgd ? "sgd" : "adam"); },
         [](C& c, const std::string& n, const std::string& v) {
             if (v == "adam") c.optimizer = OptimizerKind::adam;
             else if (v == "sgd") c.optimizer = OptimizerKind::sgd;
             else throw ConfigError("config " + n + ": expected adam or sgd");
         }},
        real_field("train", "beta1", &C::beta1),
        real_field("train", "beta2", &C::beta2),
        real_field("train", "epsilon", &C::epsilon),
        real_field("train", "momentum", &C::momentum),
        seed_field("train", "init_seed", &C::init_seed),
        seed_field("train", "shuffle_seed", &C::shuffle_seed),

        int_field("eval", "clusters", &C::clusters),
        int_field("eval", "kmeans_max_iter", &C::kmeans_max_iter),
        real_field("eval", "kmeans_tol", &C::kmeans_tol),
        seed_field("eval", "kmeans_seed", &C::kmeans_seed),
        int_field("eval", "heatmap_pairs", &C::heatmap_pairs),
        int_field("eval", "heatmap_bins", &C::heatmap_bins),
        seed_field("eval", "heatmap_seed", &C::heatmap_seed),
        real_field("eval", "holdout", &C::holdout),
        seed_field("eval", "holdout_seed", &C::holdout_seed),
        {"eval", "oos_frame", [](const C& c) { return std::optional<std::string>(to_string(c.oos_frame)); },
         [](C& c, const std::string&, const std::string& v) { c.oos_frame = parse_oos_frame(v); }},

        int_field("mds", "dim", &C::mds_dim),
        int_field("mds", "max_iter", &C::mds_max_iter),
        real_field("mds", "eps", &C::mds_eps),
        seed_field("mds", "seed", &C::mds_seed),

        {"sweep", "refs", [](const C& c) { return std::optional<std::string>(join_list(c.sweep_refs)); },
         [](C& c, const std::string& n, const std::string& v) { c.sweep_refs = parse_list(n, v); }},
        int_field("sweep", "repeats", &C::sweep_repeats),
    };
    return table;
}

} // namespace

void PipelineConfig::resolve() {
    auto fill = [this](std::optional<std::uint64_t>& s, SeedStream stream) {
        if (!s) s = derive_seed(seed, stream);
    };
    fill(synth_seed, kSynth);
    fill(panel_seed, kPanel);
    fill(init_seed, kInit);
    fill(shuffle_seed, kShuffle);
    fill(kmeans_seed, kKmeans);
    fill(heatmap_seed, kHeatmap);
    fill(holdout_seed, kHoldout);
    fill(mds_seed, kMds);
}

bool PipelineConfig::resolved() const {
    return synth_seed && panel_seed && init_seed && shuffle_seed && kmeans_seed && heatmap_seed && holdout_seed &&
           mds_seed;
}

void PipelineConfig::set(const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos) throw ConfigError("config key '" + dotted_key + "' must be section.key");
    const std::string section = dotted_key.substr(0, dot);
    const std::string key = dotted_key.substr(dot + 1);
    for (const auto& f : fields()) {
        if (section == f.section && key == f.key) {
            f.set(*this, dotted_key, value);
            return;
        }
    }
    throw ConfigError("unknown config key '" + dotted_key + "'");
}

NetworkSpec PipelineConfig::network(std::size_t input_dim) const {
    NetworkSpec spec;
    spec.input_dim = input_dim;
    spec.encoder_hidden = encoder;
    spec.leaky_slope = leaky_slope;
    spec.output = output;
    spec.validate();
    return spec;
}

TrainConfig PipelineConfig::train_config() const {
    TrainConfig t;
    t.epochs = epochs;
    t.batch_size = batch_size;
    t.learning_rate = learning_rate;
    t.optimizer = optimizer;
    t.beta1 = beta1;
    t.beta2 = beta2;
    t.epsilon = epsilon;
    t.momentum = momentum;
    t.init_seed = init_seed.value_or(derive_seed(seed, kInit));
    t.shuffle_seed = shuffle_seed.value_or(derive_seed(seed, kShuffle));
    t.validate();
    return t;
}

MdsConfig PipelineConfig::mds_config() const {
    MdsConfig m;
    m.target_dim = mds_dim;
    m.max_iter = mds_max_iter;
    m.eps = mds_eps;
    m.rng_seed = mds_seed.value_or(derive_seed(seed, kMds));
    m.validate();
    return m;
}

SynthParams PipelineConfig::synth_params() const {
    SynthParams p;
    p.n_clusters = synth_clusters;
    p.per_cluster = synth_per_cluster;
    p.seed_len = synth_seed_len;
    p.mutation_rate = synth_mutation_rate;
    p.rng_seed = synth_seed.value_or(derive_seed(seed, kSynth));
    return p;
}

std::string PipelineConfig::effective_workdir() const {
    if (!workdir.empty()) return workdir;
    if (const char* env = std::getenv("SEQAE_WORKDIR"); env && *env) return env;
    return ".";
}

void write_config(std::ostream& out, const PipelineConfig& cfg) {
    boost::property_tree::ptree tree;
    for (const auto& f : fields()) {
        if (auto v = f.get(cfg)) tree.put(boost::property_tree::ptree::path_type(std::string(f.section) + "." + f.key), *v);
    }
    boost::property_tree::write_ini(out, tree);
}

std::string config_to_string(const PipelineConfig& cfg) {
    std::ostringstream out;
    write_config(out, cfg);
    return out.str();
}

void write_config(const std::string& path, const PipelineConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write config '" + path + "'");
    write_config(out, cfg);
}

PipelineConfig read_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    PipelineConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("config key '" + section + "' must live inside a [section]");
        for (const auto& [key, value] : body) cfg.set(section + "." + key, value.data());
    }
    return cfg;
}

PipelineConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    return read_config(in);
}

PipelineConfig config_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_config(in);
}

} // namespace seqae
