// sgmotif: subsample / scatter-gather motif discovery workbench.
// One binary; every subcommand is deterministic given its flags.

#include <atomic>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sgm/bench.hpp"
#include "sgm/compare.hpp"
#include "sgm/corpus.hpp"
#include "sgm/fasta.hpp"
#include "sgm/motif.hpp"
#include "sgm/reduce.hpp"
#include "sgm/runner.hpp"
#include "sgm/scramble.hpp"
#include "sgm/subsample.hpp"

namespace {

namespace fs = std::filesystem;

std::uint64_t parse_seed(const std::string& text) {
    if (text == "random") {
        std::random_device device;
        return (static_cast<std::uint64_t>(device()) << 32) ^ device();
    }
    std::size_t consumed = 0;
    const std::uint64_t seed = std::stoull(text, &consumed, 0);
    if (consumed != text.size()) throw CLI::ValidationError("--seed", "expected integer or 'random'");
    return seed;
}

void add_engine_flags(CLI::App* cmd, sgm::EngineConfig& engine, bool& no_rc) {
    cmd->add_option("--lengths", engine.lengths, "motif lengths to scan")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--per-length", engine.per_length, "motifs reported per length")
        ->capture_default_str();
    cmd->add_flag("--no-rc", no_rc, "do not fold reverse complements");
    cmd->add_option("--redundancy", engine.redundancy_hamming,
                    "Hamming distance treated as redundant")
        ->capture_default_str();
}

std::pair<std::string, std::uint16_t> parse_listen(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon + 1 == text.size()) {
        throw CLI::ValidationError("--listen", "expected host:port");
    }
    const int port = std::stoi(text.substr(colon + 1));
    if (port < 1024 || port > 65534) {
        throw CLI::ValidationError("--listen", "port must be in [1024, 65534]");
    }
    return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGPIPE, SIG_IGN);

    CLI::App app{"subsample / scatter-gather motif discovery workbench"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // ---- discover ----
    auto* discover_cmd = app.add_subcommand("discover", "run motif discovery on one input pair");
    struct {
        std::string target, background, out;
        sgm::EngineConfig engine;
        bool no_rc = false;
    } discover_args;
    discover_cmd->add_option("--target", discover_args.target, "target FASTA")->required();
    discover_cmd->add_option("--background", discover_args.background, "background FASTA")
        ->required();
    discover_cmd->add_option("--out", discover_args.out, "output motif TSV")->required();
    add_engine_flags(discover_cmd, discover_args.engine, discover_args.no_rc);
    discover_cmd->callback([&] {
        auto& a = discover_args;
        a.engine.both_strands = !a.no_rc;
        const auto motifs = sgm::discover(sgm::parse_fasta_file(a.target),
                                          sgm::parse_fasta_file(a.background), a.engine);
        sgm::write_motif_tsv_file(motifs, a.out);
        std::cerr << "wrote " << motifs.size() << " motifs to " << a.out << "\n";
    });

    // ---- subsample ----
    auto* subsample_cmd = app.add_subcommand("subsample", "write sub-sampled replicate files");
    struct {
        std::string in, out_dir, seed = "0";
        int percent = 0;
        std::uint32_t count = 0;
    } subsample_args;
    subsample_cmd->add_option("--in", subsample_args.in, "input FASTA")->required();
    subsample_cmd->add_option("--percent", subsample_args.percent, "window percentage [1,100]")
        ->required();
    subsample_cmd->add_option("--count", subsample_args.count, "number of replicates")->required();
    subsample_cmd->add_option("--seed", subsample_args.seed, "RNG seed (or 'random')");
    subsample_cmd->add_option("--out-dir", subsample_args.out_dir, "output directory")->required();
    subsample_cmd->callback([&] {
        auto& a = subsample_args;
        const auto records = sgm::parse_fasta_file(a.in);
        const sgm::SubsampleSpec spec{a.percent, a.count, parse_seed(a.seed)};
        const auto replicates = sgm::generate_replicates(records, spec);
        fs::create_directories(a.out_dir);
        for (std::size_t i = 0; i < replicates.size(); ++i) {
            const auto path = (fs::path(a.out_dir) / ("sub_" + std::to_string(i) + ".fa")).string();
            sgm::write_fasta_file(replicates[i], path);
            std::cerr << "wrote " << path << "\n";
        }
    });

    // ---- scramble ----
    auto* scramble_cmd = app.add_subcommand("scramble", "write a scrambled background FASTA");
    struct {
        std::string in, out, mode = "mono", seed = "0";
    } scramble_args;
    scramble_cmd->add_option("--in", scramble_args.in, "input FASTA")->required();
    scramble_cmd->add_option("--out", scramble_args.out, "output FASTA")->required();
    scramble_cmd->add_option("--seed", scramble_args.seed, "RNG seed (or 'random')");
    scramble_cmd->add_option("--mode", scramble_args.mode, "mono|di")
        ->check(CLI::IsMember({"mono", "di"}));
    scramble_cmd->callback([&] {
        auto& a = scramble_args;
        const auto mode = a.mode == "di" ? sgm::ScrambleMode::Dinucleotide
                                         : sgm::ScrambleMode::Mononucleotide;
        const auto records = sgm::parse_fasta_file(a.in);
        sgm::write_fasta_file(sgm::scramble(records, parse_seed(a.seed), mode), a.out);
        std::cerr << "wrote " << a.out << "\n";
    });

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "distributed subsample+discover+merge run");
    struct {
        std::string target, background, out, seed = "0";
        std::string hosts, timings, merged_out, engine_cmd;
        int percent = 100;
        int local_workers = 0;
        int cap = 0;
        int min_support = 1;
        bool random_assignment = false;
        bool no_rc = false;
        int connect_timeout_ms = 10'000;
        int job_timeout_ms = 3'600'000;
        sgm::EngineConfig engine;
    } run_args;
    run_cmd->add_option("--target", run_args.target, "target FASTA")->required();
    run_cmd->add_option("--background", run_args.background, "background FASTA")->required();
    run_cmd->add_option("--percent", run_args.percent, "window percentage [1,100]")->required();
    run_cmd->add_option("--seed", run_args.seed, "RNG seed (or 'random')");
    auto* hosts_opt =
        run_cmd->add_option("--workers", run_args.hosts, "hosts file (host port_base per line)");
    auto* local_opt =
        run_cmd->add_option("--local", run_args.local_workers, "run N in-process workers");
    hosts_opt->excludes(local_opt);
    local_opt->excludes(hosts_opt);
    run_cmd->add_option("--out", run_args.out, "merged motif TSV")->required();
    run_cmd->add_option("--timings", run_args.timings, "timings JSON output");
    run_cmd->add_option("--merged-out", run_args.merged_out,
                        "merged TSV with support/workers columns, mode order");
    run_cmd->add_option("--cap", run_args.cap, "merged report cap (default lengths*per-length)");
    run_cmd->add_option("--min-support", run_args.min_support, "drop motifs below this support");
    run_cmd->add_flag("--random-assignment", run_args.random_assignment,
                      "assign replicates to workers in random order");
    run_cmd->add_option("--engine-cmd", run_args.engine_cmd,
                        "external engine template with {target} {background} {out} (local mode)");
    run_cmd->add_option("--connect-timeout-ms", run_args.connect_timeout_ms, "TCP connect timeout");
    run_cmd->add_option("--job-timeout-ms", run_args.job_timeout_ms, "job completion timeout");
    add_engine_flags(run_cmd, run_args.engine, run_args.no_rc);
    run_cmd->callback([&] {
        auto& a = run_args;
        if (a.hosts.empty() && a.local_workers == 0) {
            throw CLI::RequiredError("--workers <hostsfile> or --local <n>");
        }
        a.engine.both_strands = !a.no_rc;
        sgm::RunOptions options;
        options.engine = a.engine;
        options.report_cap = a.cap;
        options.min_support = a.min_support;
        options.random_assignment = a.random_assignment;
        options.connect_timeout_ms = a.connect_timeout_ms;
        options.job_timeout_ms = a.job_timeout_ms;
        if (!a.engine_cmd.empty()) options.external_cmd = a.engine_cmd;
        options.spec.percent = a.percent;
        options.spec.seed = parse_seed(a.seed);

        const auto target = sgm::parse_fasta_file(a.target);
        const auto background = sgm::parse_fasta_file(a.background);

        sgm::RunResult result;
        if (!a.hosts.empty()) {
            const auto workers = sgm::parse_hosts_file(a.hosts);
            options.spec.replicates = static_cast<std::uint32_t>(workers.size());
            result = sgm::run_tcp(target, background, workers, options);
        } else {
            options.spec.replicates = static_cast<std::uint32_t>(a.local_workers);
            result = sgm::run_local(target, background, a.local_workers, options);
        }

        // outputs only after the whole run succeeded
        sgm::write_motif_tsv_file(result.merged, a.out);
        if (!a.merged_out.empty()) sgm::write_merged_tsv_file(result.detail, a.merged_out);
        if (!a.timings.empty()) sgm::write_timings_file(result.timings, a.timings);
        std::cerr << "merged " << result.merged.size() << " motifs into " << a.out << " ("
                  << result.timings.total_ms << " ms)\n";
    });

    // ---- worker ----
    auto* worker_cmd = app.add_subcommand("worker", "serve discovery jobs over TCP");
    struct {
        std::string listen;
        std::string engine_cmd;
    } worker_args;
    worker_cmd
        ->add_option("--listen", worker_args.listen,
                     "host:port_base (uses port_base and port_base+1)")
        ->required();
    worker_cmd->add_option("--engine-cmd", worker_args.engine_cmd,
                           "run jobs through an external engine template");
    worker_cmd->callback([&] {
        const auto [host, port] = parse_listen(worker_args.listen);
        sgm::WorkerConfig config;
        config.host = host;
        config.port_base = port;
        if (!worker_args.engine_cmd.empty()) config.engine_cmd = worker_args.engine_cmd;
        sgm::WorkerServer server(config);
        std::cerr << "worker listening on " << host << ":" << server.port_base()
                  << " (control) and " << (server.port_base() + 1) << " (data)\n";
        std::atomic<bool> stop{false};
        server.serve(stop);
    });

    // ---- compare ----
    auto* compare_cmd = app.add_subcommand("compare", "overlap report between two motif TSVs");
    struct {
        std::string a, b, out;
        std::vector<int> topk = {3, 5, 10};
    } compare_args;
    compare_cmd->add_option("--a", compare_args.a, "motif TSV (its head defines top-k)")->required();
    compare_cmd->add_option("--b", compare_args.b, "motif TSV")->required();
    compare_cmd->add_option("--topk", compare_args.topk, "k values")->delimiter(',');
    compare_cmd->add_option("--out", compare_args.out, "comparison JSON")->required();
    compare_cmd->callback([&] {
        auto& a = compare_args;
        const auto report = sgm::compare(sgm::parse_motif_tsv_file(a.a),
                                         sgm::parse_motif_tsv_file(a.b), a.topk);
        std::ofstream out(a.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + a.out + "' for writing");
        out << sgm::comparison_to_json(report);
        std::cerr << "common " << report.common << ", a-only " << report.a_only << ", b-only "
                  << report.b_only << "\n";
    });

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "emit CSV tables from a bench directory");
    struct {
        std::string runs, out_dir;
    } report_args;
    report_cmd->add_option("--runs", report_args.runs, "bench output directory")->required();
    report_cmd->add_option("--out-dir", report_args.out_dir, "directory for the CSV tables")
        ->required();
    report_cmd->callback([&] {
        sgm::emit_tables(sgm::collect_bench_entries(report_args.runs), report_args.out_dir);
        std::cerr << "wrote runtimes.csv topk.csv quality.csv to " << report_args.out_dir << "\n";
    });

    // ---- bench ----
    auto* bench_cmd =
        app.add_subcommand("bench", "full sweep: baselines, runs, comparisons, tables");
    struct {
        std::string target, background, out_dir, hosts, seed = "0";
        sgm::BenchPlan plan;
        bool no_rc = false;
    } bench_args;
    bench_cmd->add_option("--target", bench_args.target, "target FASTA")->required();
    bench_cmd->add_option("--background", bench_args.background, "background FASTA")->required();
    bench_cmd->add_option("--out-dir", bench_args.out_dir, "output directory")->required();
    bench_cmd->add_option("--percents", bench_args.plan.percents, "sub-sample percentages")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--runs", bench_args.plan.runs_per_point, "runs per point")
        ->capture_default_str();
    auto* bench_local =
        bench_cmd->add_option("--local", bench_args.plan.local_workers, "in-process worker count");
    auto* bench_hosts = bench_cmd->add_option("--workers", bench_args.hosts, "hosts file");
    bench_local->excludes(bench_hosts);
    bench_hosts->excludes(bench_local);
    bench_cmd->add_option("--seed", bench_args.seed, "base seed (or 'random')");
    bench_cmd->add_option("--cap", bench_args.plan.report_cap, "merged report cap");
    bench_cmd->add_option("--topk", bench_args.plan.topk, "top-k values")->delimiter(',');
    add_engine_flags(bench_cmd, bench_args.plan.engine, bench_args.no_rc);
    bench_cmd->callback([&] {
        auto& a = bench_args;
        a.plan.engine.both_strands = !a.no_rc;
        a.plan.base_seed = parse_seed(a.seed);
        if (!a.hosts.empty()) a.plan.tcp_workers = sgm::parse_hosts_file(a.hosts);
        sgm::run_bench(a.plan, sgm::parse_fasta_file(a.target),
                       sgm::parse_fasta_file(a.background), a.out_dir);
        std::cerr << "bench complete; tables under " << a.out_dir << "\n";
    });

    // ---- make-corpus (hidden) ----
    auto* corpus_cmd = app.add_subcommand("make-corpus", "generate a planted-motif corpus");
    corpus_cmd->group(""); // hidden
    struct {
        std::string out_dir, seed = "0";
        sgm::CorpusSpec spec;
    } corpus_args;
    corpus_cmd->add_option("--out-dir", corpus_args.out_dir, "output directory")->required();
    corpus_cmd->add_option("--sequences", corpus_args.spec.sequences)->capture_default_str();
    corpus_cmd->add_option("--length", corpus_args.spec.length)->capture_default_str();
    corpus_cmd->add_option("--motif", corpus_args.spec.motif)->capture_default_str();
    corpus_cmd->add_option("--plant-fraction", corpus_args.spec.plant_fraction)
        ->capture_default_str();
    corpus_cmd->add_option("--line-width", corpus_args.spec.line_width)->capture_default_str();
    corpus_cmd->add_option("--seed", corpus_args.seed, "RNG seed (or 'random')");
    corpus_cmd->callback([&] {
        auto& a = corpus_args;
        a.spec.seed = parse_seed(a.seed);
        const auto corpus = sgm::make_corpus(a.spec);
        fs::create_directories(a.out_dir);
        sgm::write_fasta_file(corpus.target, (fs::path(a.out_dir) / "target.fa").string());
        sgm::write_fasta_file(corpus.background, (fs::path(a.out_dir) / "background.fa").string());
        std::cerr << "wrote target.fa and background.fa to " << a.out_dir << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
