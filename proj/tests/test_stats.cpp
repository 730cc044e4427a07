#include "doctest.h"

#include <cmath>

#include "sgm/stats.hpp"
#include "support/oracles.hpp"

using sgm::EnrichmentInput;

TEST_CASE("certain event: P(X >= 0) is exactly ln 1") {
    CHECK(sgm::log_hypergeom_tail({10, 5, 5, 0}) == 0.0);
    CHECK(sgm::log_hypergeom_tail({2000, 1000, 0, 0}) == 0.0);
    // support lower bound above zero still yields a certain event
    CHECK(sgm::log_hypergeom_tail({10, 9, 9, 8}) == 0.0);
}

TEST_CASE("worked example: total=10, 5 successes, 5 draws, k=4") {
    // tail terms: C(5,4)*C(5,1) = 25 and C(5,5)*C(5,0) = 1, over C(10,5) = 252
    const double expected = std::log(26.0 / 252.0);
    CHECK(sgm::log_hypergeom_tail({10, 5, 5, 4}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exhaustive agreement with exact rationals for total <= 12") {
    for (int total = 1; total <= 12; ++total) {
        sgm::LogFactorial lf(static_cast<std::size_t>(total));
        for (int successes = 0; successes <= total; ++successes) {
            for (int draws = 0; draws <= total; ++draws) {
                for (int k = 0; k <= std::min(successes, draws); ++k) {
                    if (draws - k > total - successes) continue;
                    const double got = sgm::log_hypergeom_tail(
                        {total, successes, draws, k}, lf);
                    const double want = oracle::small_log_hypergeom_tail(total, successes, draws, k);
                    REQUIRE_MESSAGE(std::abs(got - want) <= 1e-9,
                                    "N=" << total << " K=" << successes << " n=" << draws
                                         << " k=" << k << " got " << got << " want " << want);
                }
            }
        }
    }
}

TEST_CASE("spot checks against big-integer rationals up to total=2000") {
    struct Point {
        std::int64_t total, successes, draws, k;
    };
    const Point points[] = {
        {2000, 1000, 1000, 520}, {2000, 900, 600, 300}, {2000, 100, 100, 20},
        {1500, 750, 100, 60},    {800, 200, 300, 90},   {2000, 5, 1000, 5},
        {1987, 1200, 400, 260},
    };
    sgm::LogFactorial lf(2000);
    for (const auto& p : points) {
        const double got = sgm::log_hypergeom_tail({p.total, p.successes, p.draws, p.k}, lf);
        const double want = oracle::big_log_hypergeom_tail(p.total, p.successes, p.draws, p.k);
        REQUIRE_MESSAGE(std::abs(got - want) <= 1e-6 * std::abs(want),
                        "N=" << p.total << " got " << got << " want " << want);
    }
}

TEST_CASE("tail is non-increasing in the observed count") {
    sgm::LogFactorial lf(500);
    sgm::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto total = static_cast<std::int64_t>(2 + rng.next_below(499));
        const auto successes = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total) + 1));
        const auto draws = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total) + 1));
        double previous = 0.0;
        for (std::int64_t k = 0; k <= std::min(successes, draws); ++k) {
            if (draws - k > total - successes) continue;
            const double tail = sgm::log_hypergeom_tail({total, successes, draws, k}, lf);
            CHECK(tail <= previous + 1e-12);
            CHECK(tail <= 0.0);
            previous = tail;
        }
    }
}

TEST_CASE("duality: swapping successes and draws is bit-identical") {
    sgm::LogFactorial lf(300);
    sgm::Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        const auto total = static_cast<std::int64_t>(2 + rng.next_below(299));
        const auto successes = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total) + 1));
        const auto draws = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total) + 1));
        const auto hi = std::min(successes, draws);
        const auto lo = std::max<std::int64_t>(0, draws - (total - successes));
        const auto k = lo + static_cast<std::int64_t>(
                                rng.next_below(static_cast<std::uint64_t>(hi - lo) + 1));
        const double direct = sgm::log_hypergeom_tail({total, successes, draws, k}, lf);
        const double swapped = sgm::log_hypergeom_tail({total, draws, successes, k}, lf);
        CHECK(direct == swapped);
    }
}

TEST_CASE("inconsistent counts are rejected") {
    CHECK_THROWS_AS(sgm::log_hypergeom_tail({10, 11, 5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(sgm::log_hypergeom_tail({10, 5, 11, 2}), std::invalid_argument);
    CHECK_THROWS_AS(sgm::log_hypergeom_tail({10, 5, 5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(sgm::log_hypergeom_tail({10, 5, 3, 4}), std::invalid_argument);
    // more background hits than background sequences
    CHECK_THROWS_AS(sgm::log_hypergeom_tail({10, 2, 9, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sgm::log_hypergeom_tail({-1, 0, 0, 0}), std::invalid_argument);
}
