#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seqae {

/// Ordered residue alphabet with constant-time index lookup.
class Alphabet {
public:
    /// Default nucleotide alphabet, in the order A, T, G, C.
    Alphabet();
    explicit Alphabet(std::string_view symbols);

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& symbols() const noexcept { return symbols_; }
    char symbol(std::size_t i) const { return symbols_.at(i); }

    bool contains(char c) const noexcept { return index_[static_cast<unsigned char>(c)] >= 0; }
    /// 0-based position of `c`, or -1 when `c` is not a member.
    int index(char c) const noexcept { return index_[static_cast<unsigned char>(c)]; }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

private:
    std::string symbols_;
    int index_[256];
};

struct Sequence {
    std::string id;
    std::string residues;

    bool operator==(const Sequence&) const = default;
};

/// Ordered collection of sequences with unique ids.
class SequenceSet {
public:
    SequenceSet() = default;

    /// Throws ValidationError on a duplicate id or an empty residue string.
    void add(Sequence s);

    std::size_t size() const noexcept { return seqs_.size(); }
    bool empty() const noexcept { return seqs_.empty(); }
    std::size_t max_len() const noexcept { return max_len_; }

    const Sequence& operator[](std::size_t i) const { return seqs_[i]; }
    const std::vector<Sequence>& sequences() const noexcept { return seqs_; }
    auto begin() const { return seqs_.begin(); }
    auto end() const { return seqs_.end(); }

    bool contains(const std::string& id) const { return by_id_.count(id) != 0; }
    /// Position of `id` in the set. Throws LookupError when absent.
    std::size_t position(const std::string& id) const;
    const Sequence& by_id(const std::string& id) const { return seqs_[position(id)]; }

    std::vector<std::string> ids() const;

    /// Sequences at the given positions, in that order.
    SequenceSet subset(const std::vector<std::size_t>& positions) const;

    bool operator==(const SequenceSet& o) const { return seqs_ == o.seqs_; }

private:
    std::vector<Sequence> seqs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::size_t max_len_ = 0;
};

/// Reads FASTA text. Header id is the text after '>' up to the first
/// whitespace; sequence lines are concatenated and uppercased. Blank lines
/// are ignored.
SequenceSet parse_fasta(std::istream& in, const Alphabet& alphabet = Alphabet{});
SequenceSet parse_fasta(std::string_view text, const Alphabet& alphabet = Alphabet{});
SequenceSet read_fasta(const std::string& path, const Alphabet& alphabet = Alphabet{});

/// One record per sequence, residues wrapped at `width` columns (0 = no wrap).
void write_fasta(std::ostream& out, const SequenceSet& set, std::size_t width = 0);
void write_fasta(const std::string& path, const SequenceSet& set, std::size_t width = 0);

struct DedupResult {
    SequenceSet unique;
    /// Keyed by the id of the first occurrence.
    std::map<std::string, std::size_t> multiplicity;
    /// Members of `unique` seen more than once, in `unique` order.
    SequenceSet recurrent;
};

DedupResult dedup(const SequenceSet& set);

/// Two-column TSV (id, count) in `unique` order.
void write_multiplicity(std::ostream& out, const DedupResult& result);

struct SynthParams {
    std::size_t n_clusters = 5;
    std::size_t per_cluster = 100;
    std::size_t seed_len = 200;
    double mutation_rate = 0.05;
    std::uint64_t rng_seed = 1;
};

struct SynthDataset {
    SequenceSet set;
    /// Cluster index per sequence, aligned with `set`.
    std::vector<int> labels;
    std::map<std::string, int> label_of;
};

/// Random cluster seeds plus mutated members. A member is its seed with
/// per-position substitutions at `mutation_rate` followed by a random length
/// change of up to 10% of `seed_len` via single-residue insertions or
/// deletions. Indels are only applied when `mutation_rate` > 0.
SynthDataset synth_dataset(const SynthParams& params, const Alphabet& alphabet = Alphabet{});

} // namespace seqae
