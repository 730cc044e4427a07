#include "doctest.h"

#include <algorithm>

#include "sgm/reduce.hpp"
#include "support/oracles.hpp"

using sgm::MergedMotif;
using sgm::Motif;

namespace {

Motif make(const std::string& consensus, double ln_p) {
    Motif m;
    m.length = static_cast<int>(consensus.size());
    m.consensus = consensus;
    m.target_containing = 3;
    m.target_total = 10;
    m.bg_containing = 1;
    m.bg_total = 10;
    m.ln_p = ln_p;
    return m;
}

} // namespace

TEST_CASE("support counting and ordering") {
    const Motif a = make("AAAAAA", -9.0);
    const Motif b = make("CCCCCC", -8.0);
    const Motif c = make("GGGGGG", -7.0);
    const Motif d = make("TTTTTT", -6.0);
    const Motif e = make("ACGTAC", -5.0);
    const std::vector<std::vector<Motif>> lists{{a, b, c}, {a, c, d}, {a, e}};

    const auto merged = sgm::reduce_mode(lists, 100);
    REQUIRE(merged.size() == 5);
    CHECK(merged[0].motif.consensus == "AAAAAA");
    CHECK(merged[0].support == 3);
    CHECK(merged[0].workers == std::vector<int>{0, 1, 2});
    CHECK(merged[1].motif.consensus == "GGGGGG");
    CHECK(merged[1].support == 2);
    // remaining support-1 motifs ranked by ln_p
    CHECK(merged[2].motif.consensus == "CCCCCC");
    CHECK(merged[3].motif.consensus == "TTTTTT");
    CHECK(merged[4].motif.consensus == "ACGTAC");
}

TEST_CASE("merged ln_p is the minimum across workers, counts from that worker") {
    Motif first = make("ACACAC", -4.0);
    first.target_containing = 2;
    Motif second = make("ACACAC", -9.5);
    second.target_containing = 7;
    const auto merged = sgm::reduce_mode({{first}, {second}}, 10);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].support == 2);
    CHECK(merged[0].motif.ln_p == -9.5);
    CHECK(merged[0].motif.target_containing == 7);
}

TEST_CASE("single list is the identity, truncated to the cap") {
    sgm::Rng rng(14);
    const auto list = oracle::random_motif_list(rng, 20);
    const auto merged = sgm::reduce_mode({list}, 7);
    REQUIRE(merged.size() == std::min<std::size_t>(7, list.size()));
    for (std::size_t i = 0; i < merged.size(); ++i) {
        CHECK(merged[i].motif == list[i]);
        CHECK(merged[i].support == 1);
    }
}

TEST_CASE("agrees with the brute-force tally on random instances") {
    sgm::Rng rng(90);
    for (int instance = 0; instance < 220; ++instance) {
        const auto workers = 1 + rng.next_below(5);
        std::vector<std::vector<Motif>> lists;
        for (std::uint64_t w = 0; w < workers; ++w) {
            lists.push_back(oracle::random_motif_list(rng, 12));
        }
        const int cap = 1 + static_cast<int>(rng.next_below(20));
        const int min_support = 1 + static_cast<int>(rng.next_below(2));

        const auto got = sgm::reduce_mode(lists, cap, min_support);
        const auto want = oracle::naive_reduce(lists, cap, min_support);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].motif == want[i].motif);
            CHECK(got[i].support == want[i].support);
            CHECK(got[i].workers == want[i].workers);
        }
    }
}

TEST_CASE("permutation invariance over worker order") {
    sgm::Rng rng(123);
    for (int instance = 0; instance < 50; ++instance) {
        std::vector<std::vector<Motif>> lists;
        for (int w = 0; w < 4; ++w) lists.push_back(oracle::random_motif_list(rng, 10));
        const auto baseline = sgm::reduce_mode(lists, 15);

        auto shuffled = lists;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
        }
        const auto permuted = sgm::reduce_mode(shuffled, 15);
        REQUIRE(permuted.size() == baseline.size());
        for (std::size_t i = 0; i < permuted.size(); ++i) {
            CHECK(permuted[i].motif.consensus == baseline[i].motif.consensus);
            CHECK(permuted[i].support == baseline[i].support);
            CHECK(permuted[i].motif.ln_p == baseline[i].motif.ln_p);
        }
    }
}

TEST_CASE("merged_to_motifs re-sorts ascending by lnP") {
    const Motif strong = make("ACGTAC", -20.0);
    const Motif weak = make("TTTTTT", -1.0);
    // weak has support 2, strong support 1: mode order puts weak first
    const auto merged = sgm::reduce_mode({{weak, strong}, {weak}}, 10);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].motif.consensus == "TTTTTT");
    const auto plain = sgm::merged_to_motifs(merged);
    CHECK(plain[0].consensus == "ACGTAC");
    CHECK(plain[1].consensus == "TTTTTT");
}

TEST_CASE("merged TSV carries support and workers columns") {
    const auto merged = sgm::reduce_mode({{make("ACGTAC", -3.0)}, {make("ACGTAC", -2.5)}}, 5);
    const auto tsv = sgm::write_merged_tsv(merged);
    CHECK(tsv.find("\tsupport\tworkers\n") != std::string::npos);
    CHECK(tsv.find("\t2\t0,1\n") != std::string::npos);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(sgm::reduce_mode({}, 5), std::invalid_argument);
    CHECK_THROWS_AS(sgm::reduce_mode({{make("ACGTAC", -1.0)}}, 0), std::invalid_argument);
    CHECK(sgm::reduce_mode({{}}, 5).empty()); // one empty worker list is fine
}
