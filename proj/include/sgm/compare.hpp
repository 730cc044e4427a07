#ifndef SGM_COMPARE_HPP
#define SGM_COMPARE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgm/motif.hpp"
#include "sgm/runner_types.hpp"

namespace sgm {

class CompareError : public std::runtime_error {
public:
    enum class Kind { UnsortedInput, EmptyInput };

    CompareError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Overlap between two motif lists under exact (length, consensus) identity.
// topk_recall[k] counts a's top-k identities found anywhere in b;
// topk_strict[k] counts them within b's own top k.
struct ComparisonReport {
    std::int64_t a_total = 0;
    std::int64_t b_total = 0;
    std::int64_t common = 0;
    std::int64_t a_only = 0;
    std::int64_t b_only = 0;
    std::map<int, std::int64_t> topk_recall;
    std::map<int, std::int64_t> topk_strict;
};

// Both lists must be sorted ascending by ln_p (their head is their "top").
ComparisonReport compare(const std::vector<Motif>& a, const std::vector<Motif>& b,
                         const std::vector<int>& ks);

std::string comparison_to_json(const ComparisonReport& report);
ComparisonReport comparison_from_json(const std::string& text);

// One bench data point; sequential baselines carry timings only.
struct BenchEntry {
    int percent = 0;
    int run = 0;
    bool sequential = false;
    std::optional<ComparisonReport> comparison;
    RunTimings timings;
};

// Emits runtimes.csv (rows percent plus a sequential row, averaged over
// runs), topk.csv and quality.csv (columns per run) under out_dir.
void emit_tables(const std::vector<BenchEntry>& entries, const std::string& out_dir);

} // namespace sgm

#endif
