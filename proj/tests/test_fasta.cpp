#include "doctest.h"

#include "sgm/fasta.hpp"
#include "support/oracles.hpp"

using sgm::FastaError;
using sgm::SequenceRecord;

TEST_CASE("parse: records, body concatenation, first-line width") {
    const auto records = sgm::parse_fasta_string(">s1\nACGT\nACGT\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].header == "s1");
    CHECK(records[0].residues == "ACGTACGT");
    CHECK(records[0].line_width == 4);
}

TEST_CASE("parse: lower case is normalized") {
    const auto records = sgm::parse_fasta_string(">s1\nacg\n");
    CHECK(records[0].residues == "ACG");
    CHECK(records[0].line_width == 3);
}

TEST_CASE("parse: multiple records stay in order") {
    const auto records = sgm::parse_fasta_string(">a\nAC\n>b\nGT\nGT\n>c\nNNN\n");
    REQUIRE(records.size() == 3);
    CHECK(records[0].header == "a");
    CHECK(records[1].residues == "GTGT");
    CHECK(records[2].residues == "NNN");
}

TEST_CASE("parse: CRLF input accepted, missing final newline accepted") {
    const auto records = sgm::parse_fasta_string(">s\r\nACGT\r\nAC");
    CHECK(records[0].residues == "ACGTAC");
    CHECK(records[0].line_width == 4);
}

TEST_CASE("parse error kinds") {
    const auto kind_of = [](const std::string& text) {
        try {
            sgm::parse_fasta_string(text);
        } catch (const FastaError& e) {
            return e.kind();
        }
        FAIL("expected FastaError");
        return FastaError::Kind::EmptyInput;
    };
    CHECK(kind_of("") == FastaError::Kind::EmptyInput);
    CHECK(kind_of("\n  \n") == FastaError::Kind::EmptyInput);
    CHECK(kind_of("ACGT\n>s\nAC\n") == FastaError::Kind::MalformedHeader);
    CHECK(kind_of(">s1\nACGX\n") == FastaError::Kind::IllegalCharacter);
    CHECK(kind_of(">a\n>b\nACGT\n") == FastaError::Kind::EmptyBody);
    CHECK(kind_of(">a\nACGT\n>b\n") == FastaError::Kind::EmptyBody);
}

TEST_CASE("write: wrapping at line_width, short final line") {
    CHECK(sgm::write_fasta_string({{"s1", "ACGTA", 4}}) == ">s1\nACGT\nA\n");
    CHECK(sgm::write_fasta_string({{"s1", "AC", 80}}) == ">s1\nAC\n");
    CHECK(sgm::write_fasta_string({{"s1", "ACGT", 4}}) == ">s1\nACGT\n");
}

TEST_CASE("write: invariant violations rejected") {
    CHECK_THROWS_AS(sgm::write_fasta_string({{"s", "", 4}}), FastaError);
    CHECK_THROWS_AS(sgm::write_fasta_string({{"s", "ACGT", 0}}), FastaError);
    CHECK_THROWS_AS(sgm::write_fasta_string({{"s\nx", "ACGT", 4}}), FastaError);
    CHECK_THROWS_AS(sgm::write_fasta_string({{"s", "acgt", 4}}), FastaError);
}

TEST_CASE("round trip: parse(write(r)) == r over generated records") {
    sgm::Rng rng(2024);
    std::vector<SequenceRecord> batch;
    for (int i = 0; i < 1100; ++i) {
        batch.push_back(oracle::random_record(rng));
        if (batch.size() == 10) {
            const auto parsed = sgm::parse_fasta_string(sgm::write_fasta_string(batch));
            REQUIRE(parsed == batch);
            batch.clear();
        }
    }
}

TEST_CASE("round trip: write(parse(f)) == f on canonical files") {
    sgm::Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        std::vector<SequenceRecord> records;
        const auto count = 1 + rng.next_below(5);
        for (std::uint64_t j = 0; j < count; ++j) records.push_back(oracle::random_record(rng));
        const std::string canonical = sgm::write_fasta_string(records);
        CHECK(sgm::write_fasta_string(sgm::parse_fasta_string(canonical)) == canonical);
    }
}
