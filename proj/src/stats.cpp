#include "sgm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sgm {

namespace {

// logaddexp with -inf as the additive identity.
double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

void check_input(const EnrichmentInput& e) {
    const bool ok = e.total >= 0 && e.target_total >= 0 && e.containing >= 0 &&
                    e.target_containing >= 0 && e.target_total <= e.total &&
                    e.containing <= e.total &&
                    e.target_containing <= std::min(e.target_total, e.containing) &&
                    e.containing - e.target_containing <= e.total - e.target_total;
    if (!ok) {
        throw std::invalid_argument(
            "inconsistent enrichment counts: total=" + std::to_string(e.total) +
            " target_total=" + std::to_string(e.target_total) +
            " containing=" + std::to_string(e.containing) +
            " target_containing=" + std::to_string(e.target_containing));
    }
}

} // namespace

LogFactorial::LogFactorial(std::size_t max_n) : table_(max_n + 1, 0.0) {
    for (std::size_t i = 2; i <= max_n; ++i) {
        table_[i] = table_[i - 1] + std::log(static_cast<double>(i));
    }
}

double log_hypergeom_tail(const EnrichmentInput& e, const LogFactorial& lf) {
    check_input(e);
    if (static_cast<std::size_t>(e.total) > lf.max_n()) {
        throw std::invalid_argument("log-factorial table smaller than population");
    }

    const std::int64_t population = e.total;
    // The distribution is symmetric in (successes, draws); canonicalizing
    // makes both orientations evaluate bit-identically.
    const std::int64_t successes = std::min(e.target_total, e.containing);
    const std::int64_t draws = std::max(e.target_total, e.containing);
    const std::int64_t k = e.target_containing;

    const std::int64_t lo = std::max<std::int64_t>(0, draws - (population - successes));
    const std::int64_t hi = std::min(successes, draws);
    if (k <= lo) return 0.0; // certain event

    const double log_denom = lf(population) - lf(draws) - lf(population - draws);
    double acc = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = k; i <= hi; ++i) {
        const double term = lf(successes) - lf(i) - lf(successes - i) +
                            lf(population - successes) - lf(draws - i) -
                            lf(population - successes - draws + i) - log_denom;
        acc = log_add(acc, term);
    }
    return std::min(acc, 0.0);
}

double log_hypergeom_tail(const EnrichmentInput& e) {
    check_input(e);
    LogFactorial lf(static_cast<std::size_t>(e.total));
    return log_hypergeom_tail(e, lf);
}

} // namespace sgm
