#include "doctest.h"

#include <set>

#include "sgm/corpus.hpp"
#include "sgm/motif.hpp"
#include "sgm/stats.hpp"
#include "support/oracles.hpp"

using sgm::EngineConfig;
using sgm::Motif;
using sgm::MotifError;
using sgm::SequenceRecord;

namespace {

int hamming(const std::string& a, const std::string& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

} // namespace

TEST_CASE("count_kmers basics") {
    const std::vector<SequenceRecord> records{{"s", "ACGT", 4}};
    SUBCASE("single strand") {
        const auto counts = sgm::count_kmers(records, 4, false);
        REQUIRE(counts.size() == 1);
        CHECK(counts.at("ACGT") == 1);
    }
    SUBCASE("ACGT is its own reverse complement") {
        const auto counts = sgm::count_kmers(records, 4, true);
        REQUIRE(counts.size() == 1);
        CHECK(counts.at("ACGT") == 1);
    }
    SUBCASE("reverse complement folds to the smaller representative") {
        // GGGG folds onto CCCC
        const auto counts = sgm::count_kmers({{"s", "GGGG", 4}}, 4, true);
        REQUIRE(counts.size() == 1);
        CHECK(counts.at("CCCC") == 1);
    }
    SUBCASE("N windows are skipped") {
        const auto counts = sgm::count_kmers({{"s", "ACNGT", 5}}, 2, false);
        CHECK(counts.size() == 2); // AC and GT only
        CHECK(counts.count("CN") == 0);
    }
    SUBCASE("sequences shorter than k contribute nothing") {
        CHECK(sgm::count_kmers({{"s", "ACG", 3}}, 7, false).empty());
    }
}

TEST_CASE("count_kmers equals the brute-force oracle on 50 random sequences") {
    sgm::Rng rng(41);
    std::vector<SequenceRecord> records;
    for (int i = 0; i < 50; ++i) {
        records.push_back({"s" + std::to_string(i), oracle::random_residues(rng, 200, true), 80});
    }
    for (bool both_strands : {false, true}) {
        const auto got = sgm::count_kmers(records, 6, both_strands);
        const auto want = oracle::naive_count_kmers(records, 6, both_strands);
        REQUIRE(got.size() == want.size());
        CHECK(got == want);
    }
}

TEST_CASE("reverse_complement") {
    CHECK(sgm::reverse_complement("ACGT") == "ACGT");
    CHECK(sgm::reverse_complement("AAAC") == "GTTT");
    CHECK(sgm::reverse_complement("ANT") == "ANT");
}

TEST_CASE("discover finds a planted motif at rank 1, confirmed by a full scoring table") {
    const auto corpus = sgm::make_corpus({100, 300, "ACGTACGT", 0.6, 9, 70});
    EngineConfig cfg;
    const auto motifs = sgm::discover(corpus.target, corpus.background, cfg);

    REQUIRE(!motifs.empty());
    CHECK(motifs[0].consensus == "ACGTACGT");
    CHECK(motifs[0].length == 8);
    CHECK(motifs[0].target_containing >= 60);
    CHECK(motifs[0].ln_p < -40.0);

    // independent full-table argmin over every canonical 8-mer
    const auto target_counts = oracle::naive_count_kmers(corpus.target, 8, true);
    const auto bg_counts = oracle::naive_count_kmers(corpus.background, 8, true);
    const auto total = static_cast<std::int64_t>(corpus.target.size() + corpus.background.size());
    sgm::LogFactorial lf(static_cast<std::size_t>(total));
    std::string argmin;
    double best = 1.0;
    for (const auto& [kmer, tc] : target_counts) {
        const auto bg_it = bg_counts.find(kmer);
        const std::int64_t bc = bg_it == bg_counts.end() ? 0 : bg_it->second;
        const double ln_p = sgm::log_hypergeom_tail(
            {total, static_cast<std::int64_t>(corpus.target.size()), tc + bc, tc}, lf);
        if (ln_p < best) {
            best = ln_p;
            argmin = kmer;
        }
    }
    CHECK(argmin == "ACGTACGT");
}

TEST_CASE("discover output properties") {
    const auto corpus = sgm::make_corpus({60, 400, "GATTACAA", 0.5, 3, 70});
    EngineConfig cfg;
    const auto motifs = sgm::discover(corpus.target, corpus.background, cfg);

    SUBCASE("sorted ascending by (ln_p, length, consensus)") {
        for (std::size_t i = 1; i < motifs.size(); ++i) {
            const auto& a = motifs[i - 1];
            const auto& b = motifs[i];
            const bool ordered = a.ln_p < b.ln_p ||
                                 (a.ln_p == b.ln_p &&
                                  (a.length < b.length ||
                                   (a.length == b.length && a.consensus < b.consensus)));
            CHECK(ordered);
        }
    }

    SUBCASE("counts are reproduced by recounting each consensus") {
        const auto check_counts = [&](const std::vector<SequenceRecord>& records, const Motif& m,
                                      std::int64_t expected) {
            const auto counts = oracle::naive_count_kmers(records, m.length, true);
            const auto it = counts.find(m.consensus);
            const std::int64_t got = it == counts.end() ? 0 : it->second;
            CHECK(got == expected);
        };
        for (const auto& m : motifs) {
            check_counts(corpus.target, m, m.target_containing);
            check_counts(corpus.background, m, m.bg_containing);
            CHECK(m.target_total == static_cast<std::int64_t>(corpus.target.size()));
            CHECK(m.bg_total == static_cast<std::int64_t>(corpus.background.size()));
        }
    }

    SUBCASE("no two same-length motifs within the redundancy distance") {
        for (std::size_t i = 0; i < motifs.size(); ++i) {
            for (std::size_t j = i + 1; j < motifs.size(); ++j) {
                if (motifs[i].length != motifs[j].length) continue;
                CHECK(hamming(motifs[i].consensus, motifs[j].consensus) > cfg.redundancy_hamming);
                CHECK(hamming(motifs[i].consensus,
                              sgm::reverse_complement(motifs[j].consensus)) >
                      cfg.redundancy_hamming);
            }
        }
    }

    SUBCASE("deterministic") {
        CHECK(sgm::discover(corpus.target, corpus.background, cfg) == motifs);
    }
}

TEST_CASE("discover with target == background is symmetric and non-informative") {
    const auto corpus = sgm::make_corpus({40, 250, "", 0.0, 12, 70});
    const auto motifs = sgm::discover(corpus.target, corpus.target, EngineConfig{});
    for (const auto& m : motifs) {
        CHECK(m.target_containing == m.bg_containing);
    }
}

TEST_CASE("report size is capped at lengths * per_length and reaches it on rich input") {
    const auto corpus = sgm::make_corpus({80, 600, "ACGTACGT", 0.5, 5, 70});
    EngineConfig cfg;
    const auto motifs = sgm::discover(corpus.target, corpus.background, cfg);
    CHECK(motifs.size() == 75);

    cfg.per_length = 3;
    cfg.lengths = {6, 8};
    CHECK(sgm::discover(corpus.target, corpus.background, cfg).size() <= 6);
}

TEST_CASE("discover rejects empty inputs") {
    const std::vector<SequenceRecord> some{{"s", "ACGTACGTACGT", 12}};
    CHECK_THROWS_AS(sgm::discover({}, some, EngineConfig{}), MotifError);
    CHECK_THROWS_AS(sgm::discover(some, {}, EngineConfig{}), MotifError);
}

TEST_CASE("motif TSV round trip is exact") {
    const auto corpus = sgm::make_corpus({30, 200, "TTGACGTC", 0.5, 21, 70});
    const auto motifs = sgm::discover(corpus.target, corpus.background, EngineConfig{});
    const std::string tsv = sgm::write_motif_tsv(motifs);
    CHECK(sgm::parse_motif_tsv(tsv) == motifs);
    CHECK(sgm::write_motif_tsv(sgm::parse_motif_tsv(tsv)) == tsv);
    CHECK(tsv.rfind("#rank\tlength\tconsensus\ttarget_containing\ttarget_total\t"
                    "bg_containing\tbg_total\tlnP\n",
                    0) == 0);
}

TEST_CASE("motif TSV parser names the offending column") {
    CHECK_THROWS_WITH_AS(sgm::parse_motif_tsv("#rank\tlength\tconsensus\n1\t4\tACGT\n"),
                         doctest::Contains("target_containing"), MotifError);
    const std::string header =
        "#rank\tlength\tconsensus\ttarget_containing\ttarget_total\tbg_containing\tbg_total\tlnP\n";
    CHECK_THROWS_WITH_AS(sgm::parse_motif_tsv(header + "1\t4\tACGT\t2\t5\t1\n"),
                         doctest::Contains("bg_total"), MotifError);
    CHECK_THROWS_WITH_AS(sgm::parse_motif_tsv(header + "1\t4\tACGT\t2\t5\t1\t5\tx\n"),
                         doctest::Contains("lnP"), MotifError);
    CHECK_THROWS_AS(sgm::parse_motif_tsv(header + "1\t4\tACGX\t2\t5\t1\t5\t-1.0\n"), MotifError);
    CHECK_THROWS_AS(sgm::parse_motif_tsv(""), MotifError);
    CHECK(sgm::parse_motif_tsv(header).empty());
}

TEST_CASE("run_external error paths") {
    SUBCASE("template placeholders are checked") {
        CHECK_THROWS_AS(sgm::run_external("engine --in {target}", "t.fa", "b.fa"),
                        std::invalid_argument);
    }
    SUBCASE("nonzero exit becomes CommandFailed with diagnostics") {
        try {
            sgm::run_external("echo boom >&2; test -z '{target}{background}{out}'", "t.fa", "b.fa");
            FAIL("expected CommandFailed");
        } catch (const MotifError& e) {
            CHECK(e.kind() == MotifError::Kind::CommandFailed);
            CHECK(std::string(e.what()).find("boom") != std::string::npos);
        }
    }
    SUBCASE("bad output file becomes UnparseableOutput") {
        try {
            sgm::run_external("echo garbage; printf 'no-header\\n' > {out}; : {target} {background}",
                              "t.fa", "b.fa");
            FAIL("expected UnparseableOutput");
        } catch (const MotifError& e) {
            CHECK(e.kind() == MotifError::Kind::UnparseableOutput);
        }
    }
}
