#include "seqae/encoding.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "seqae/error.hpp"
#include "seqae/matrix_io.hpp"
#include "seqae/rng.hpp"

namespace seqae {

std::string to_string(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::onehot: return "onehot";
    case EncodingKind::ordinal: return "ordinal";
    case EncodingKind::reference: return "reference";
    }
    return "?";
}

EncodingKind parse_encoding_kind(const std::string& s) {
    if (s == "onehot") return EncodingKind::onehot;
    if (s == "ordinal") return EncodingKind::ordinal;
    if (s == "reference") return EncodingKind::reference;
    throw ConfigError("unknown encoding kind '" + s + "' (expected onehot, ordinal or reference)");
}

std::size_t EncodingMeta::width() const {
    switch (kind) {
    case EncodingKind::onehot: return target_len * alphabet.size();
    case EncodingKind::ordinal: return target_len;
    case EncodingKind::reference: return panel_ids.size();
    }
    return 0;
}

EncodedDataset EncodedDataset::subset(const std::vector<std::size_t>& rows) const {
    EncodedDataset out;
    out.meta = meta;
    out.features = Matrix<float>(rows.size(), dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.ids.push_back(ids.at(rows[r]));
        std::copy_n(features.row(rows[r]).begin(), dim(), out.features.row(r).begin());
    }
    return out;
}

std::vector<int> default_onehot_slots(const Alphabet& alphabet) {
    std::vector<int> slots(alphabet.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(slots.size() - 1 - i);
    return slots;
}

namespace {

std::size_t resolve_target_len(const SequenceSet& set, std::size_t target_len) {
    if (target_len == 0) return set.max_len();
    for (const auto& s : set)
        if (s.residues.size() > target_len)
            throw LengthError("sequence '" + s.id + "' has length " + std::to_string(s.residues.size()) +
                              ", longer than target length " + std::to_string(target_len));
    return target_len;
}

} // namespace

EncodedDataset one_hot_encode(const SequenceSet& set, const Alphabet& alphabet,
                              std::size_t target_len, std::vector<int> slots) {
    const std::size_t L = resolve_target_len(set, target_len);
    const std::size_t C = alphabet.size();
    if (slots.empty()) slots = default_onehot_slots(alphabet);
    if (slots.size() != C) throw ConfigError("one-hot slot map must have one entry per symbol");
    {
        auto sorted = slots;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < C; ++i)
            if (sorted[i] != static_cast<int>(i))
                throw ConfigError("one-hot slot map must be a permutation of 0..C-1");
    }

    EncodedDataset out;
    out.meta.kind = EncodingKind::onehot;
    out.meta.alphabet = alphabet.symbols();
    out.meta.target_len = L;
    out.meta.onehot_slots = slots;
    out.ids = set.ids();
    out.features = Matrix<float>(set.size(), L * C, 0.0f);
    for (std::size_t i = 0; i < set.size(); ++i) {
        auto row = out.features.row(i);
        const auto& r = set[i].residues;
        for (std::size_t p = 0; p < r.size(); ++p) {
            const int k = alphabet.index(r[p]);
            if (k < 0)
                throw ValidationError("sequence '" + set[i].id + "' contains character '" +
                                      std::string(1, r[p]) + "' outside the alphabet");
            row[p * C + static_cast<std::size_t>(slots[static_cast<std::size_t>(k)])] = 1.0f;
        }
    }
    return out;
}

std::map<char, double> default_ordinal_values() {
    return {{'A', 0.25}, {'T', 0.5}, {'G', 0.75}, {'C', 1.0}};
}

EncodedDataset ordinal_encode(const SequenceSet& set, const std::map<char, double>& values,
                              std::size_t target_len, const Alphabet& alphabet) {
    for (char c : alphabet.symbols()) {
        auto it = values.find(c);
        if (it == values.end())
            throw ConfigError(std::string("ordinal value map has no entry for '") + c + "'");
        if (!(it->second >= 0.0 && it->second <= 1.0))
            throw ConfigError(std::string("ordinal value for '") + c + "' must lie in [0, 1]");
    }
    const std::size_t L = resolve_target_len(set, target_len);

    EncodedDataset out;
    out.meta.kind = EncodingKind::ordinal;
    out.meta.alphabet = alphabet.symbols();
    out.meta.target_len = L;
    out.meta.ordinal_values = values;
    out.ids = set.ids();
    out.features = Matrix<float>(set.size(), L, 0.0f);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& r = set[i].residues;
        for (std::size_t p = 0; p < r.size(); ++p) {
            auto it = values.find(r[p]);
            if (it == values.end())
                throw ConfigError(std::string("ordinal value map has no entry for '") + r[p] + "'");
            out.features(i, p) = static_cast<float>(it->second);
        }
    }
    return out;
}

ReferencePanel sample_references(const SequenceSet& set, std::size_t k, std::uint64_t rng_seed,
                                 const ScoringScheme& scheme) {
    if (k < 1 || k > set.size())
        throw ArgumentError("reference count k=" + std::to_string(k) + " must lie in [1, " +
                            std::to_string(set.size()) + "]");
    std::vector<std::size_t> idx(set.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(rng_seed);
    // partial Fisher-Yates: the first k slots are the sample
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    ReferencePanel panel;
    panel.rng_seed = rng_seed;
    panel.scheme = scheme;
    for (std::size_t i = 0; i < k; ++i) panel.ref_ids.push_back(set[idx[i]].id);
    return panel;
}

SequenceSet resolve_panel(const ReferencePanel& panel, const SequenceSet& pool) {
    if (panel.ref_ids.empty()) throw ArgumentError("reference panel is empty");
    SequenceSet refs;
    for (const auto& id : panel.ref_ids) {
        if (!pool.contains(id)) throw LookupError("reference id '" + id + "' not found");
        refs.add(pool.by_id(id));
    }
    return refs;
}

EncodedDataset reference_encode(const SequenceSet& set, const ReferencePanel& panel,
                                const SequenceSet& pool, unsigned threads,
                                AlignmentCounters* counters) {
    const SequenceSet refs = resolve_panel(panel, pool);
    const DistanceMatrix d = rect_matrix(set, refs, panel.scheme, threads, counters);

    EncodedDataset out;
    out.meta.kind = EncodingKind::reference;
    out.meta.panel_ids = panel.ref_ids;
    out.meta.panel_seed = panel.rng_seed;
    out.meta.scheme = panel.scheme;
    out.ids = set.ids();
    out.features = Matrix<float>(d.rows(), d.cols(), d.values());
    return out;
}

// --- files -----------------------------------------------------------------

namespace {

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string read_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(std::string("missing ") + what + " line");
    return line;
}

std::vector<std::string> tagged_fields(const std::string& line, const std::string& tag) {
    auto fields = split(line, '\t');
    if (fields.empty() || fields[0] != tag) throw FormatError("expected a '" + tag + "' line");
    fields.erase(fields.begin());
    return fields;
}

std::uint64_t to_u64(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("missing header field '" + key + "'");
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw FormatError("header field '" + key + "' is not an integer");
    }
}

int to_int(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("missing header field '" + key + "'");
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw FormatError("header field '" + key + "' is not an integer");
    }
}

} // namespace

void write_encoded(std::ostream& out, const EncodedDataset& data) {
    const auto& m = data.meta;
    out << "#ENC kind=" << to_string(m.kind) << " d=" << data.dim() << " n=" << data.size();
    switch (m.kind) {
    case EncodingKind::onehot: {
        std::vector<std::string> slots;
        for (int s : m.onehot_slots) slots.push_back(std::to_string(s));
        out << " alphabet=" << m.alphabet << " target_len=" << m.target_len << " slots=" << join(slots, ',');
        break;
    }
    case EncodingKind::ordinal: {
        std::vector<std::string> vals;
        for (auto [c, v] : m.ordinal_values) vals.push_back(std::string(1, c) + ":" + format_exact(v));
        out << " alphabet=" << m.alphabet << " target_len=" << m.target_len << " values=" << join(vals, ',');
        break;
    }
    case EncodingKind::reference:
        out << " k=" << m.panel_ids.size() << " panel_seed=" << m.panel_seed << " match=" << m.scheme.match
            << " mismatch=" << m.scheme.mismatch << " gap=" << m.scheme.gap;
        break;
    }
    out << '\n' << "#IDS";
    for (const auto& id : data.ids) out << '\t' << id;
    out << '\n';
    if (m.kind == EncodingKind::reference) {
        out << "#PANEL";
        for (const auto& id : m.panel_ids) out << '\t' << id;
        out << '\n';
    }
    write_raw_matrix(out, static_cast<std::uint32_t>(data.size()), static_cast<std::uint32_t>(data.dim()),
                     0u, data.features.data());
}

void write_encoded(const std::string& path, const EncodedDataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write encoded dataset '" + path + "'");
    write_encoded(out, data);
}

EncodedDataset read_encoded(std::istream& in) {
    const std::string header = read_line(in, "#ENC header");
    std::istringstream hs(header);
    std::string tag;
    hs >> tag;
    if (tag != "#ENC") throw FormatError("not an encoded dataset (missing #ENC header)");
    std::map<std::string, std::string> kv;
    for (std::string tok; hs >> tok;) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw FormatError("malformed header field '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    if (!kv.count("kind")) throw FormatError("missing header field 'kind'");

    EncodedDataset data;
    auto& m = data.meta;
    try {
        m.kind = parse_encoding_kind(kv["kind"]);
    } catch (const ConfigError& e) {
        throw FormatError(e.what());
    }
    const auto d = to_u64(kv, "d");
    const auto n = to_u64(kv, "n");
    if (m.kind == EncodingKind::reference) {
        m.panel_seed = to_u64(kv, "panel_seed");
        m.scheme = {to_int(kv, "match"), to_int(kv, "mismatch"), to_int(kv, "gap")};
    } else {
        m.alphabet = kv["alphabet"];
        m.target_len = to_u64(kv, "target_len");
        if (m.kind == EncodingKind::onehot) {
            for (const auto& s : split(kv["slots"], ',')) m.onehot_slots.push_back(std::stoi(s));
        } else {
            for (const auto& pair : split(kv["values"], ',')) {
                if (pair.size() < 3 || pair[1] != ':') throw FormatError("malformed ordinal value '" + pair + "'");
                m.ordinal_values[pair[0]] = std::stod(pair.substr(2));
            }
        }
    }

    data.ids = tagged_fields(read_line(in, "#IDS"), "#IDS");
    if (m.kind == EncodingKind::reference) m.panel_ids = tagged_fields(read_line(in, "#PANEL"), "#PANEL");
    if (data.ids.size() != n) throw FormatError("id count does not match n");
    if (m.width() != d) throw FormatError("encoding parameters imply a different width than d");

    auto raw = read_raw_matrix(in);
    if (raw.rows != n || raw.cols != d) throw FormatError("matrix shape does not match the #ENC header");
    data.features = Matrix<float>(n, d, std::move(raw.values));
    return data;
}

EncodedDataset read_encoded(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open encoded dataset '" + path + "'");
    try {
        return read_encoded(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_panel(std::ostream& out, const ReferencePanel& panel, const SequenceSet& refs) {
    out << "#panel\tseed=" << panel.rng_seed << "\tk=" << panel.size() << "\tmatch=" << panel.scheme.match
        << "\tmismatch=" << panel.scheme.mismatch << "\tgap=" << panel.scheme.gap << '\n';
    out << "id\tresidues\n";
    for (const auto& id : panel.ref_ids) out << id << '\t' << refs.by_id(id).residues << '\n';
}

void write_panel(const std::string& path, const ReferencePanel& panel, const SequenceSet& refs) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write panel '" + path + "'");
    write_panel(out, panel, refs);
}

PanelFile read_panel(std::istream& in, const Alphabet& alphabet) {
    auto fields = tagged_fields(read_line(in, "#panel"), "#panel");
    std::map<std::string, std::string> kv;
    for (const auto& f : fields) {
        auto eq = f.find('=');
        if (eq == std::string::npos) throw FormatError("malformed panel field '" + f + "'");
        kv[f.substr(0, eq)] = f.substr(eq + 1);
    }
    PanelFile pf;
    pf.panel.rng_seed = to_u64(kv, "seed");
    pf.panel.scheme = {to_int(kv, "match"), to_int(kv, "mismatch"), to_int(kv, "gap")};
    const auto k = to_u64(kv, "k");
    if (read_line(in, "column header") != "id\tresidues") throw FormatError("expected 'id<TAB>residues' header");
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw FormatError("panel row without a tab: '" + line + "'");
        Sequence s{line.substr(0, tab), line.substr(tab + 1)};
        for (char c : s.residues)
            if (!alphabet.contains(c))
                throw ValidationError("reference '" + s.id + "' contains character '" + std::string(1, c) +
                                      "' outside the alphabet");
        pf.panel.ref_ids.push_back(s.id);
        pf.refs.add(std::move(s));
    }
    if (pf.panel.size() != k) throw FormatError("panel row count does not match k");
    return pf;
}

PanelFile read_panel(const std::string& path, const Alphabet& alphabet) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open panel '" + path + "'");
    return read_panel(in, alphabet);
}

} // namespace seqae
