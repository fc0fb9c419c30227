#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "seqae/alignment.hpp"
#include "seqae/matrix.hpp"
#include "seqae/sequences.hpp"

namespace seqae {

enum class EncodingKind { onehot, ordinal, reference };

std::string to_string(EncodingKind kind);
EncodingKind parse_encoding_kind(const std::string& s);

/// Everything needed to reproduce an encoding, and to derive its width.
struct EncodingMeta {
    EncodingKind kind = EncodingKind::onehot;
    // onehot / ordinal
    std::string alphabet = "ATGC";
    std::size_t target_len = 0;
    std::vector<int> onehot_slots;           ///< alphabet index -> slot in a block
    std::map<char, double> ordinal_values;
    // reference
    std::vector<std::string> panel_ids;
    std::uint64_t panel_seed = 0;
    ScoringScheme scheme;

    /// Feature width implied by the descriptor.
    std::size_t width() const;
    bool operator==(const EncodingMeta&) const = default;
};

struct EncodedDataset {
    std::vector<std::string> ids;
    Matrix<float> features;   ///< N x D, values in [0, 1]
    EncodingMeta meta;

    std::size_t size() const noexcept { return features.rows(); }
    std::size_t dim() const noexcept { return features.cols(); }

    /// Rows at the given positions, same meta.
    EncodedDataset subset(const std::vector<std::size_t>& rows) const;

    bool operator==(const EncodedDataset&) const = default;
};

/// Block layout copied from the ATGC example: A occupies the last slot, then
/// T, G, and C the first. For an alphabet of size C, symbol i maps to slot
/// C - 1 - i.
std::vector<int> default_onehot_slots(const Alphabet& alphabet);

/// target_len == 0 means set.max_len(). Throws LengthError naming the first
/// sequence longer than target_len.
EncodedDataset one_hot_encode(const SequenceSet& set, const Alphabet& alphabet,
                              std::size_t target_len = 0,
                              std::vector<int> slots = {});

/// A=0.25, T=0.5, G=0.75, C=1.0
std::map<char, double> default_ordinal_values();

/// Throws ConfigError when `values` misses a symbol of `alphabet` or holds a
/// value outside [0, 1].
EncodedDataset ordinal_encode(const SequenceSet& set,
                              const std::map<char, double>& values = default_ordinal_values(),
                              std::size_t target_len = 0,
                              const Alphabet& alphabet = Alphabet{});

struct ReferencePanel {
    std::vector<std::string> ref_ids;
    std::uint64_t rng_seed = 0;
    ScoringScheme scheme;

    std::size_t size() const noexcept { return ref_ids.size(); }
    bool operator==(const ReferencePanel&) const = default;
};

/// Uniform sample of k ids without replacement, in draw order.
ReferencePanel sample_references(const SequenceSet& set, std::size_t k, std::uint64_t rng_seed,
                                 const ScoringScheme& scheme = {});

/// The panel's sequences looked up in `pool`. Throws LookupError for an id
/// absent from `pool`.
SequenceSet resolve_panel(const ReferencePanel& panel, const SequenceSet& pool);

/// Row i holds the distances from set[i] to each panel reference. The panel is
/// resolved against `pool` (e.g. the training set).
EncodedDataset reference_encode(const SequenceSet& set, const ReferencePanel& panel,
                                const SequenceSet& pool, unsigned threads = 1,
                                AlignmentCounters* counters = nullptr);

/// Panel ids resolved against `set` itself.
inline EncodedDataset reference_encode(const SequenceSet& set, const ReferencePanel& panel,
                                       unsigned threads = 1,
                                       AlignmentCounters* counters = nullptr) {
    return reference_encode(set, panel, set, threads, counters);
}

// --- files -----------------------------------------------------------------
//
// Encoded dataset:
//   #ENC kind=<kind> d=<D> n=<N> <key=value params...>\n
//   #IDS\t<id1>\t<id2>...\n
//   [#PANEL\t<ref1>\t<ref2>...\n]          reference encodings only
//   SWDM binary matrix (N x D)
//
// Panel (TSV):
//   #panel\tseed=<s>\tk=<K>\tmatch=<m>\tmismatch=<x>\tgap=<g>\n
//   id\tresidues\n
//   <ref_id>\t<residues>\n ...

void write_encoded(std::ostream& out, const EncodedDataset& data);
void write_encoded(const std::string& path, const EncodedDataset& data);
EncodedDataset read_encoded(std::istream& in);
EncodedDataset read_encoded(const std::string& path);

void write_panel(std::ostream& out, const ReferencePanel& panel, const SequenceSet& refs);
void write_panel(const std::string& path, const ReferencePanel& panel, const SequenceSet& refs);

struct PanelFile {
    ReferencePanel panel;
    SequenceSet refs;  ///< panel sequences, in panel order
};
PanelFile read_panel(std::istream& in, const Alphabet& alphabet = Alphabet{});
PanelFile read_panel(const std::string& path, const Alphabet& alphabet = Alphabet{});

} // namespace seqae
