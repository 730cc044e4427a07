#include "doctest.h"

#include "sgm/subsample.hpp"
#include "support/oracles.hpp"

using sgm::SequenceRecord;
using sgm::SubsampleSpec;

TEST_CASE("window length is floor(len * percent / 100), clamped to 1") {
    sgm::Rng rng(1);
    SequenceRecord record{"r", oracle::random_residues(rng, 1000), 60};

    const auto out = sgm::subsample_record(record, 25, rng);
    CHECK(out.residues.size() == 250);
    CHECK(record.residues.find(out.residues) != std::string::npos);
    CHECK(out.header == "r");
    CHECK(out.line_width == 60);

    SequenceRecord tiny{"t", "ACG", 3};
    CHECK(sgm::subsample_record(tiny, 1, rng).residues.size() == 1);
}

TEST_CASE("percent=100 is the identity for every record") {
    sgm::Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto record = oracle::random_record(rng);
        auto draw = sgm::derive_stream(9, static_cast<std::uint64_t>(i));
        CHECK(sgm::subsample_record(record, 100, draw) == record);
    }
}

TEST_CASE("length, substring and format retention over random cases") {
    sgm::Rng rng(11);
    for (int i = 0; i < 150; ++i) {
        const auto record = oracle::random_record(rng, 500);
        const int percent = 1 + static_cast<int>(rng.next_below(100));
        const auto out = sgm::subsample_record(record, percent, rng);

        const std::size_t expected =
            std::max<std::size_t>(1, record.residues.size() * static_cast<std::size_t>(percent) / 100);
        CHECK(out.residues.size() == expected);
        CHECK(record.residues.find(out.residues) != std::string::npos);
        CHECK(out.line_width == record.line_width);
        // still writable and parseable
        const auto reparsed = sgm::parse_fasta_string(sgm::write_fasta_string({out}));
        CHECK(reparsed[0] == out);
    }
}

TEST_CASE("replicates: count, determinism, per-replicate streams") {
    sgm::Rng rng(5);
    std::vector<SequenceRecord> records;
    for (int i = 0; i < 3; ++i) {
        records.push_back(SequenceRecord{"s" + std::to_string(i),
                                         oracle::random_residues(rng, 10'000), 80});
    }

    SUBCASE("identity at percent=100") {
        const auto replicates = sgm::generate_replicates(records, {100, 3, 123});
        REQUIRE(replicates.size() == 3);
        for (const auto& replicate : replicates) CHECK(replicate == records);
    }

    SUBCASE("same spec twice is byte-identical") {
        const SubsampleSpec spec{50, 2, 99};
        const auto first = sgm::generate_replicates(records, spec);
        const auto second = sgm::generate_replicates(records, spec);
        CHECK(sgm::write_fasta_string(first[0]) == sgm::write_fasta_string(second[0]));
        CHECK(sgm::write_fasta_string(first[1]) == sgm::write_fasta_string(second[1]));
    }

    SUBCASE("replicates differ across 100 seeds") {
        int distinct = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto replicates = sgm::generate_replicates(records, {50, 2, seed});
            if (replicates[0] != replicates[1]) ++distinct;
        }
        CHECK(distinct == 100);
    }

    SUBCASE("every sequence appears in every replicate") {
        const auto replicates = sgm::generate_replicates(records, {10, 4, 7});
        for (const auto& replicate : replicates) {
            REQUIRE(replicate.size() == records.size());
            for (std::size_t i = 0; i < records.size(); ++i) {
                CHECK(replicate[i].header == records[i].header);
                CHECK(records[i].residues.find(replicate[i].residues) != std::string::npos);
            }
        }
    }
}

TEST_CASE("argument validation") {
    sgm::Rng rng(0);
    const SequenceRecord record{"r", "ACGT", 4};
    CHECK_THROWS_AS(sgm::subsample_record(record, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sgm::subsample_record(record, 101, rng), std::invalid_argument);
    CHECK_THROWS_AS(sgm::generate_replicates({}, {50, 2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sgm::generate_replicates({record}, {50, 0, 0}), std::invalid_argument);
}
