#include "seqae/tables.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "seqae/error.hpp"
#include "seqae/matrix_io.hpp"

namespace seqae {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, '\t')) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("bad ") + what + " value '" + s + "'");
    }
}

template <typename Fn>
void with_output(const std::string& path, Fn fn) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    fn(out);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

Matrix<double> read_numeric_table(std::istream& in, std::vector<std::string>& keys, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(std::string("empty ") + what + " file");
    const auto header = split_tabs(line);
    if (header.size() < 2) throw FormatError(std::string(what) + " header needs at least two columns");
    const std::size_t d = header.size() - 1;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != d + 1) throw FormatError(std::string(what) + " row has the wrong number of columns");
        keys.push_back(f[0]);
        for (std::size_t t = 1; t <= d; ++t) values.push_back(parse_double(f[t], what));
    }
    return Matrix<double>(keys.size(), d, std::move(values));
}

} // namespace

void write_embedding(std::ostream& out, const Embedding& e) {
    out << "id";
    for (std::size_t t = 0; t < e.dim(); ++t) out << "\tx" << t + 1;
    out << '\n';
    for (std::size_t i = 0; i < e.size(); ++i) {
        out << e.ids[i];
        for (double v : e.coords.row(i)) out << '\t' << format_exact(v);
        out << '\n';
    }
}

void write_embedding(const std::string& path, const Embedding& e) {
    with_output(path, [&](std::ostream& out) { write_embedding(out, e); });
}

Embedding read_embedding(std::istream& in) {
    Embedding e;
    e.coords = read_numeric_table(in, e.ids, "embedding");
    return e;
}

Embedding read_embedding(const std::string& path) {
    auto in = open_input(path);
    return read_embedding(in);
}

void write_labels(std::ostream& out, const ClusterLabels& l) {
    out << "id\tlabel\n";
    for (std::size_t i = 0; i < l.ids.size(); ++i) out << l.ids[i] << '\t' << l.labels[i] << '\n';
}

void write_labels(const std::string& path, const ClusterLabels& l) {
    with_output(path, [&](std::ostream& out) { write_labels(out, l); });
}

ClusterLabels read_labels(std::istream& in, std::size_t k) {
    std::string line;
    if (!std::getline(in, line) || split_tabs(line).size() != 2) throw FormatError("labels file needs an 'id<TAB>label' header");
    ClusterLabels l;
    int max_label = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 2) throw FormatError("labels row must have two columns");
        int v;
        try {
            v = std::stoi(f[1]);
        } catch (const std::exception&) {
            throw FormatError("bad label '" + f[1] + "'");
        }
        if (v < 0) throw FormatError("negative label '" + f[1] + "'");
        l.ids.push_back(f[0]);
        l.labels.push_back(v);
        max_label = std::max(max_label, v);
    }
    l.k = k ? k : static_cast<std::size_t>(max_label + 1);
    l.validate();
    return l;
}

ClusterLabels read_labels(const std::string& path, std::size_t k) {
    auto in = open_input(path);
    return read_labels(in, k);
}

ClusterLabels align_labels(const ClusterLabels& l, const std::vector<std::string>& ids) {
    std::unordered_map<std::string, int> by_id;
    for (std::size_t i = 0; i < l.ids.size(); ++i) by_id.emplace(l.ids[i], l.labels[i]);
    ClusterLabels out;
    out.k = l.k;
    for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw LookupError("no label for id '" + id + "'");
        out.ids.push_back(id);
        out.labels.push_back(it->second);
    }
    return out;
}

void write_centroids(const std::string& path, const Centroids& c) {
    with_output(path, [&](std::ostream& out) {
        out << "cluster";
        for (std::size_t t = 0; t < c.cols(); ++t) out << "\tx" << t + 1;
        out << '\n';
        for (std::size_t m = 0; m < c.rows(); ++m) {
            out << m;
            for (double v : c.row(m)) out << '\t' << format_exact(v);
            out << '\n';
        }
    });
}

Centroids read_centroids(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::string> keys;
    return read_numeric_table(in, keys, "centroids");
}

void write_heatmap_csv(std::ostream& out, const HeatmapGrid& g) {
    for (std::size_t r = 0; r < g.bins; ++r) {
        for (std::size_t c = 0; c < g.bins; ++c) {
            if (c) out << ',';
            out << g.count(r, c);
        }
        out << '\n';
    }
}

void write_heatmap_meta(std::ostream& out, const HeatmapGrid& g) {
    out << "pairs=" << g.pairs << '\n'
        << "bins=" << g.bins << '\n'
        << "seed=" << g.rng_seed << '\n'
        << "pearson=" << format_exact(g.pearson) << '\n'
        << "embedded_min=" << format_exact(g.embedded_min) << '\n'
        << "embedded_max=" << format_exact(g.embedded_max) << '\n';
}

void write_heatmap(const std::string& csv_path, const HeatmapGrid& g) {
    with_output(csv_path, [&](std::ostream& out) { write_heatmap_csv(out, g); });
    with_output(csv_path + ".meta", [&](std::ostream& out) { write_heatmap_meta(out, g); });
}

} // namespace seqae
