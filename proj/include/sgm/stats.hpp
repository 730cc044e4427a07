#ifndef SGM_STATS_HPP
#define SGM_STATS_HPP

#include <cstdint>
#include <vector>

namespace sgm {

// Sequence-level counts behind one enrichment test: of `total` sequences,
// `target_total` are targets; `containing` sequences contain the k-mer and
// `target_containing` of those are targets.
struct EnrichmentInput {
    std::int64_t total = 0;
    std::int64_t target_total = 0;
    std::int64_t containing = 0;
    std::int64_t target_containing = 0;
};

// ln(i!) for i in [0, max_n], built once by cumulative summation.
// Read-only after construction; safe to share across threads.
class LogFactorial {
public:
    explicit LogFactorial(std::size_t max_n);
    double operator()(std::int64_t i) const { return table_[static_cast<std::size_t>(i)]; }
    std::size_t max_n() const { return table_.size() - 1; }

private:
    std::vector<double> table_;
};

// ln P(X >= target_containing) for X hypergeometric with population `total`,
// `target_total` successes and `containing` draws. Always in (-inf, 0].
// Throws std::invalid_argument on inconsistent counts.
double log_hypergeom_tail(const EnrichmentInput& e, const LogFactorial& lf);

// Convenience overload that builds a table sized to e.total.
double log_hypergeom_tail(const EnrichmentInput& e);

} // namespace sgm

#endif
