#include "seqae/sequences.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "seqae/error.hpp"
#include "seqae/rng.hpp"

namespace seqae {

Alphabet::Alphabet() : Alphabet("ATGC") {}

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
    std::fill(std::begin(index_), std::end(index_), -1);
    if (symbols_.empty()) throw ConfigError("alphabet must not be empty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        auto c = static_cast<unsigned char>(symbols_[i]);
        if (index_[c] >= 0)
            throw ConfigError(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
        index_[c] = static_cast<int>(i);
    }
}

void SequenceSet::add(Sequence s) {
    if (s.residues.empty()) throw ValidationError("sequence '" + s.id + "' has no residues");
    auto [it, inserted] = by_id_.emplace(s.id, seqs_.size());
    if (!inserted) throw ValidationError("duplicate sequence id '" + s.id + "'");
    max_len_ = std::max(max_len_, s.residues.size());
    seqs_.push_back(std::move(s));
}

std::size_t SequenceSet::position(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw LookupError("unknown sequence id '" + id + "'");
    return it->second;
}

std::vector<std::string> SequenceSet::ids() const {
    std::vector<std::string> out;
    out.reserve(seqs_.size());
    for (const auto& s : seqs_) out.push_back(s.id);
    return out;
}

SequenceSet SequenceSet::subset(const std::vector<std::size_t>& positions) const {
    SequenceSet out;
    for (auto p : positions) out.add(seqs_.at(p));
    return out;
}

namespace {

void finish_record(SequenceSet& set, Sequence& rec, const Alphabet& alphabet) {
    for (char c : rec.residues) {
        if (!alphabet.contains(c))
            throw ValidationError("sequence '" + rec.id + "' contains character '" +
                                  std::string(1, c) + "' outside the alphabet");
    }
    set.add(std::move(rec));
}

} // namespace

SequenceSet parse_fasta(std::istream& in, const Alphabet& alphabet) {
    SequenceSet set;
    Sequence rec;
    bool in_record = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            if (in_record) finish_record(set, rec, alphabet);
            auto end = std::find_if(line.begin() + 1, line.end(),
                                    [](unsigned char c) { return std::isspace(c); });
            rec = Sequence{std::string(line.begin() + 1, end), {}};
            if (rec.id.empty()) throw ParseError("FASTA header without an id", lineno);
            in_record = true;
            continue;
        }
        if (!in_record) throw ParseError("sequence data before the first '>' header", lineno);
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            rec.residues.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    if (in_record) finish_record(set, rec, alphabet);
    return set;
}

SequenceSet parse_fasta(std::string_view text, const Alphabet& alphabet) {
    std::istringstream in{std::string(text)};
    return parse_fasta(in, alphabet);
}

SequenceSet read_fasta(const std::string& path, const Alphabet& alphabet) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open FASTA file '" + path + "'");
    return parse_fasta(in, alphabet);
}

void write_fasta(std::ostream& out, const SequenceSet& set, std::size_t width) {
    for (const auto& s : set) {
        out << '>' << s.id << '\n';
        if (width == 0) {
            out << s.residues << '\n';
            continue;
        }
        for (std::size_t p = 0; p < s.residues.size(); p += width)
            out << std::string_view(s.residues).substr(p, width) << '\n';
    }
}

void write_fasta(const std::string& path, const SequenceSet& set, std::size_t width) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write FASTA file '" + path + "'");
    write_fasta(out, set, width);
}

DedupResult dedup(const SequenceSet& set) {
    DedupResult r;
    std::unordered_map<std::string_view, std::string> first_id;
    std::vector<std::string> order;
    for (const auto& s : set) {
        auto it = first_id.find(s.residues);
        if (it == first_id.end()) {
            first_id.emplace(s.residues, s.id);
            r.unique.add(s);
            r.multiplicity[s.id] = 1;
        } else {
            ++r.multiplicity[it->second];
        }
    }
    for (const auto& s : r.unique)
        if (r.multiplicity[s.id] > 1) r.recurrent.add(s);
    return r;
}

void write_multiplicity(std::ostream& out, const DedupResult& result) {
    out << "id\tcount\n";
    for (const auto& s : result.unique) out << s.id << '\t' << result.multiplicity.at(s.id) << '\n';
}

SynthDataset synth_dataset(const SynthParams& p, const Alphabet& alphabet) {
    if (p.mutation_rate < 0.0 || p.mutation_rate > 0.5)
        throw ArgumentError("mutation_rate must lie in [0, 0.5]");
    if (p.n_clusters < 1 || p.per_cluster < 1 || p.seed_len < 1)
        throw ArgumentError("cluster count, cluster size and seed length must be >= 1");

    Rng rng(p.rng_seed);
    const std::size_t C = alphabet.size();
    auto random_symbol = [&] { return alphabet.symbol(rng.below(C)); };

    std::vector<std::string> seeds(p.n_clusters);
    for (auto& seed : seeds) {
        seed.resize(p.seed_len);
        for (auto& c : seed) c = random_symbol();
    }

    const auto max_indel = static_cast<std::int64_t>(p.seed_len / 10);
    SynthDataset out;
    for (std::size_t c = 0; c < p.n_clusters; ++c) {
        for (std::size_t m = 0; m < p.per_cluster; ++m) {
            std::string s = seeds[c];
            for (auto& ch : s) {
                if (C > 1 && rng.bernoulli(p.mutation_rate)) {
                    // substitute with a different symbol
                    auto k = static_cast<std::size_t>(alphabet.index(ch));
                    ch = alphabet.symbol((k + 1 + rng.below(C - 1)) % C);
                }
            }
            if (p.mutation_rate > 0.0 && max_indel > 0) {
                auto delta = static_cast<std::int64_t>(rng.below(2 * max_indel + 1)) - max_indel;
                for (; delta > 0; --delta)
                    s.insert(s.begin() + static_cast<std::ptrdiff_t>(rng.below(s.size() + 1)),
                             random_symbol());
                for (; delta < 0 && s.size() > 1; ++delta)
                    s.erase(s.begin() + static_cast<std::ptrdiff_t>(rng.below(s.size())));
            }
            std::string id = "c" + std::to_string(c) + "_m" + std::to_string(m);
            out.label_of[id] = static_cast<int>(c);
            out.labels.push_back(static_cast<int>(c));
            out.set.add(Sequence{std::move(id), std::move(s)});
        }
    }
    return out;
}

} // namespace seqae
