#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "seqae/alignment.hpp"
#include "seqae/error.hpp"
#include "seqae/sequences.hpp"

using namespace seqae;

TEST_CASE("fasta: single record") {
    auto s = parse_fasta(std::string_view(">s1\nATGC\n"));
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Sequence{"s1", "ATGC"});
}

TEST_CASE("fasta: wrapped lines are joined and uppercased") {
    auto s = parse_fasta(std::string_view(">s1\nAT\nGC\n>s2\ngg\n"));
    REQUIRE(s.size() == 2);
    CHECK(s.by_id("s1").residues == "ATGC");
    CHECK(s.by_id("s2").residues == "GG");
}

TEST_CASE("fasta: header text after the id is dropped, CRLF tolerated") {
    auto s = parse_fasta(std::string_view(">s1 some description\r\nAC\r\n\r\n>s2\tx\nT\n"));
    CHECK(s.ids() == std::vector<std::string>{"s1", "s2"});
    CHECK(s[0].residues == "AC");
}

TEST_CASE("fasta: invalid symbol names the character and the record") {
    try {
        parse_fasta(std::string_view(">s1\nATXC\n"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find('X') != std::string::npos);
        CHECK(msg.find("s1") != std::string::npos);
    }
}

TEST_CASE("fasta: residues before any header report the line") {
    try {
        parse_fasta(std::string_view("\nATGC\n>s1\nA\n"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("fasta: duplicate ids and empty records are rejected") {
    CHECK_THROWS_AS(parse_fasta(std::string_view(">a\nA\n>a\nT\n")), ValidationError);
    CHECK_THROWS_AS(parse_fasta(std::string_view(">a\n>b\nT\n")), ValidationError);
}

TEST_CASE("fasta: custom alphabet") {
    Alphabet rna("ACGU");
    auto s = parse_fasta(std::string_view(">r\nacgu\n"), rna);
    CHECK(s[0].residues == "ACGU");
    CHECK_THROWS_AS(parse_fasta(std::string_view(">r\nACGT\n"), rna), ValidationError);
    CHECK_NOTHROW(parse_fasta(std::string_view(">r\nACGT\n"), Alphabet("ACGT")));
}

TEST_CASE("fasta: write then parse round-trips, wrapped or not") {
    SynthParams p;
    p.n_clusters = 2;
    p.per_cluster = 7;
    p.seed_len = 63;
    auto ds = synth_dataset(p);
    for (std::size_t width : {0, 10, 60}) {
        std::ostringstream out;
        write_fasta(out, ds.set, width);
        CHECK(parse_fasta(std::string_view(out.str())) == ds.set);
    }
}

TEST_CASE("sequence set: lookup and subset") {
    SequenceSet s;
    s.add({"x", "AT"});
    s.add({"y", "GGGC"});
    CHECK(s.position("y") == 1);
    CHECK(s.max_len() == 4);
    CHECK_THROWS_AS(s.position("z"), LookupError);
    auto sub = s.subset({1});
    CHECK(sub.size() == 1);
    CHECK(sub[0].id == "y");
}

namespace {
SequenceSet make(std::initializer_list<std::pair<const char*, const char*>> rows) {
    SequenceSet s;
    for (auto& [id, r] : rows) s.add({id, r});
    return s;
}
} // namespace

TEST_CASE("dedup: recurrent sequences") {
    auto r = dedup(make({{"a", "ATGC"}, {"b", "ATGC"}, {"c", "GGTA"}}));
    CHECK(r.unique.size() == 2);
    REQUIRE(r.recurrent.size() == 1);
    CHECK(r.recurrent[0].residues == "ATGC");
    CHECK(r.multiplicity.at(r.recurrent[0].id) == 2);
}

TEST_CASE("dedup: all distinct input has no recurrent part") {
    auto r = dedup(make({{"a", "A"}, {"b", "T"}, {"c", "GC"}}));
    CHECK(r.unique.size() == 3);
    CHECK(r.recurrent.empty());
}

TEST_CASE("dedup: idempotent and order-preserving") {
    auto in = make({{"a", "AT"}, {"b", "GC"}, {"c", "AT"}, {"d", "TT"}, {"e", "GC"}, {"f", "AT"}});
    auto once = dedup(in);
    CHECK(once.unique.ids() == std::vector<std::string>{"a", "b", "d"});
    CHECK(once.multiplicity.at("a") == 3);
    auto twice = dedup(once.unique);
    CHECK(twice.unique == once.unique);
    CHECK(twice.recurrent.empty());
    std::ostringstream tsv;
    write_multiplicity(tsv, once);
    CHECK(tsv.str().find("a\t3\n") != std::string::npos);
}

TEST_CASE("synth: zero mutation gives identical copies") {
    SynthParams p{1, 5, 100, 0.0, 42};
    auto ds = synth_dataset(p);
    REQUIRE(ds.set.size() == 5);
    for (const auto& s : ds.set) CHECK(s.residues == ds.set[0].residues);
    for (int l : ds.labels) CHECK(l == 0);
}

TEST_CASE("synth: deterministic per seed") {
    SynthParams p{3, 10, 50, 0.05, 9};
    auto a = synth_dataset(p), b = synth_dataset(p);
    std::ostringstream fa, fb;
    write_fasta(fa, a.set);
    write_fasta(fb, b.set);
    CHECK(fa.str() == fb.str());
    CHECK(a.labels == b.labels);
    p.rng_seed = 10;
    CHECK_FALSE(synth_dataset(p).set == a.set);
}

TEST_CASE("synth: clusters are tighter than the cross-cluster mean") {
    SynthParams p{5, 100, 200, 0.05, 7};
    auto ds = synth_dataset(p);
    REQUIRE(ds.set.size() == 500);
    auto d = pairwise_matrix(ds.set, ScoringScheme{});
    double within_max = 0, cross_sum = 0;
    std::size_t cross_n = 0;
    for (std::size_t i = 0; i < 500; ++i)
        for (std::size_t j = i + 1; j < 500; ++j) {
            if (ds.labels[i] == ds.labels[j]) {
                within_max = std::max(within_max, double(d(i, j)));
            } else {
                cross_sum += d(i, j);
                ++cross_n;
            }
        }
    CHECK(within_max < cross_sum / double(cross_n));
}
