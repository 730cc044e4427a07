#ifndef SGM_BENCH_HPP
#define SGM_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgm/compare.hpp"
#include "sgm/motif.hpp"
#include "sgm/runner.hpp"

namespace sgm {

// Full sweep: one sequential baseline per run index, one distributed run per
// (percent, run), comparisons against the matching baseline, then the three
// CSV tables. Every artifact lands under out_dir; points whose files already
// exist are skipped, so an interrupted sweep resumes where it stopped.
struct BenchPlan {
    std::vector<int> percents = {25, 55, 75, 90, 100};
    int runs_per_point = 2;
    int local_workers = 2; // used when tcp_workers is empty
    std::vector<WorkerDescriptor> tcp_workers;
    std::uint64_t base_seed = 0;
    EngineConfig engine;
    int report_cap = 0;
    std::vector<int> topk = {3, 5, 10};
};

void run_bench(const BenchPlan& plan, const std::vector<SequenceRecord>& target,
               const std::vector<SequenceRecord>& background, const std::string& out_dir);

// Rebuilds BenchEntry rows from a bench output directory (used by run_bench
// itself and by the standalone table-emitting command).
std::vector<BenchEntry> collect_bench_entries(const std::string& runs_dir);

// Seed for one (percent, run) point, derived from the plan's base seed.
std::uint64_t bench_point_seed(std::uint64_t base_seed, int percent, int run);

} // namespace sgm

#endif
