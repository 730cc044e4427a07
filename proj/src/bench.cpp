#include "sgm/bench.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sgm {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

fs::path seq_tsv_path(const fs::path& dir, int run) {
    return dir / ("seq_run" + std::to_string(run) + ".tsv");
}

fs::path point_base(const fs::path& dir, int percent, int run) {
    return dir / ("p" + std::to_string(percent) + "_run" + std::to_string(run));
}

} // namespace

std::uint64_t bench_point_seed(std::uint64_t base_seed, int percent, int run) {
    return splitmix64(splitmix64(base_seed) ^
                      splitmix64((static_cast<std::uint64_t>(percent) << 20) ^
                                 static_cast<std::uint64_t>(run)));
}

void run_bench(const BenchPlan& plan, const std::vector<SequenceRecord>& target,
               const std::vector<SequenceRecord>& background, const std::string& out_dir) {
    if (plan.runs_per_point < 1) throw std::invalid_argument("runs_per_point must be >= 1");
    for (int percent : plan.percents) {
        if (percent < 1 || percent > 100) {
            throw std::invalid_argument("bench percents must be in [1,100]");
        }
    }
    const int workers = plan.tcp_workers.empty() ? plan.local_workers
                                                 : static_cast<int>(plan.tcp_workers.size());
    if (workers < 1) throw std::invalid_argument("bench needs at least one worker");

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    // sequential baselines, one per run index
    for (int run = 0; run < plan.runs_per_point; ++run) {
        const auto tsv_path = seq_tsv_path(dir, run);
        const auto timings_path = tsv_path.string() + ".timings.json";
        if (fs::exists(tsv_path) && fs::exists(timings_path)) {
            std::cerr << "[bench] skip sequential run " << run << " (exists)\n";
            continue;
        }
        std::cerr << "[bench] sequential run " << run << "\n";
        const auto t0 = Clock::now();
        const auto motifs = discover(target, background, plan.engine);
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        RunTimings timings;
        timings.discover_ms = {elapsed};
        timings.total_ms = elapsed;
        spill(tsv_path, write_motif_tsv(motifs));
        write_timings_file(timings, timings_path);
    }

    // distributed points
    for (int percent : plan.percents) {
        for (int run = 0; run < plan.runs_per_point; ++run) {
            const auto base = point_base(dir, percent, run);
            const auto tsv_path = base.string() + ".tsv";
            const auto merged_path = base.string() + ".merged.tsv";
            const auto timings_path = base.string() + ".timings.json";
            const auto compare_path = base.string() + ".compare.json";
            if (fs::exists(tsv_path) && fs::exists(timings_path) && fs::exists(compare_path)) {
                std::cerr << "[bench] skip percent " << percent << " run " << run << " (exists)\n";
                continue;
            }
            std::cerr << "[bench] percent " << percent << " run " << run << "\n";

            RunOptions options;
            options.spec.percent = percent;
            options.spec.replicates = static_cast<std::uint32_t>(workers);
            options.spec.seed = bench_point_seed(plan.base_seed, percent, run);
            options.engine = plan.engine;
            options.report_cap = plan.report_cap;

            const RunResult result =
                plan.tcp_workers.empty()
                    ? run_local(target, background, workers, options)
                    : run_tcp(target, background, plan.tcp_workers, options);

            const auto sequential = parse_motif_tsv(slurp(seq_tsv_path(dir, run)));
            const auto report = compare(sequential, result.merged, plan.topk);

            spill(tsv_path, write_motif_tsv(result.merged));
            write_merged_tsv_file(result.detail, merged_path);
            write_timings_file(result.timings, timings_path);
            spill(compare_path, comparison_to_json(report));
        }
    }

    emit_tables(collect_bench_entries(out_dir), out_dir);
}

std::vector<BenchEntry> collect_bench_entries(const std::string& runs_dir) {
    const fs::path dir(runs_dir);
    if (!fs::is_directory(dir)) {
        throw std::invalid_argument("'" + runs_dir + "' is not a directory");
    }

    std::vector<BenchEntry> entries;
    for (const auto& item : fs::directory_iterator(dir)) {
        const std::string name = item.path().filename().string();

        // seq_run<r>.timings.json
        if (name.rfind("seq_run", 0) == 0 && name.size() > 7 + 13 &&
            name.compare(name.size() - 13, 13, ".timings.json") == 0) {
            const std::string run_text = name.substr(7, name.size() - 7 - 13);
            BenchEntry entry;
            entry.sequential = true;
            entry.percent = 100;
            entry.run = std::stoi(run_text);
            entry.timings = read_timings_file(item.path().string());
            entries.push_back(std::move(entry));
            continue;
        }

        // p<percent>_run<r>.compare.json
        if (name.rfind("p", 0) == 0 && name.size() > 13 &&
            name.compare(name.size() - 13, 13, ".compare.json") == 0) {
            const std::string stem = name.substr(1, name.size() - 1 - 13);
            const auto split = stem.find("_run");
            if (split == std::string::npos) continue;
            BenchEntry entry;
            entry.percent = std::stoi(stem.substr(0, split));
            entry.run = std::stoi(stem.substr(split + 4));
            entry.comparison = comparison_from_json(slurp(item.path()));
            const auto timings_path =
                point_base(dir, entry.percent, entry.run).string() + ".timings.json";
            if (!fs::exists(timings_path)) {
                throw std::runtime_error("missing timings for " + name);
            }
            entry.timings = read_timings_file(timings_path);
            entries.push_back(std::move(entry));
        }
    }
    if (entries.empty()) {
        throw std::invalid_argument("no bench outputs found under '" + runs_dir + "'");
    }
    return entries;
}

} // namespace sgm
