#include "sgm/runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "json.hpp"

namespace sgm {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::int64_t ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
}

nlohmann::json engine_to_json(const EngineConfig& engine) {
    return nlohmann::json{{"lengths", engine.lengths},
                          {"per_length", engine.per_length},
                          {"both_strands", engine.both_strands},
                          {"redundancy_hamming", engine.redundancy_hamming}};
}

EngineConfig engine_from_json(const nlohmann::json& j) {
    EngineConfig engine;
    engine.lengths = j.at("lengths").get<std::vector<int>>();
    engine.per_length = j.at("per_length").get<int>();
    engine.both_strands = j.at("both_strands").get<bool>();
    engine.redundancy_hamming = j.at("redundancy_hamming").get<int>();
    return engine;
}

int resolve_cap(const RunOptions& options) {
    if (options.report_cap > 0) return options.report_cap;
    return static_cast<int>(options.engine.lengths.size()) * options.engine.per_length;
}

// replicate index consumed by each worker; identity unless randomized
std::vector<std::size_t> assignment(std::size_t workers, const RunOptions& options) {
    std::vector<std::size_t> order(workers);
    for (std::size_t i = 0; i < workers; ++i) order[i] = i;
    if (options.random_assignment) {
        Rng rng = derive_stream(options.spec.seed, 0xa551'6e5eULL);
        for (std::size_t i = workers; i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.next_below(i))]);
        }
    }
    return order;
}

struct SessionTiming {
    Clock::time_point distribute_start{};
    Clock::time_point distribute_end{};
    Clock::time_point result_at{};
    Clock::time_point gathered_at{};
};

struct ReduceOutcome {
    std::vector<MergedMotif> detail;
    std::vector<Motif> merged;
};

ReduceOutcome reduce_worker_lists(const std::vector<std::vector<Motif>>& lists,
                                  const RunOptions& options) {
    ReduceOutcome outcome;
    outcome.detail = reduce_mode(lists, resolve_cap(options), options.min_support);
    outcome.merged = merged_to_motifs(outcome.detail);
    return outcome;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<std::uint64_t> counter{0};
        path_ = fs::temp_directory_path() /
                ("sgmotif_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

} // namespace

RunResult run_local(const std::vector<SequenceRecord>& target,
                    const std::vector<SequenceRecord>& background, int worker_count,
                    const RunOptions& options) {
    if (worker_count < 1) throw std::invalid_argument("worker count must be >= 1");
    if (options.spec.replicates != static_cast<std::uint32_t>(worker_count)) {
        throw RunnerError(RunnerError::Kind::ReplicateCountMismatch,
                          "spec.replicates (" + std::to_string(options.spec.replicates) +
                              ") must equal the worker count (" + std::to_string(worker_count) +
                              ") so that each worker gets one input");
    }

    const auto t_start = Clock::now();
    RunTimings timings;

    auto replicates = generate_replicates(target, options.spec);
    timings.subsample_ms = ms_between(t_start, Clock::now());

    const auto order = assignment(replicates.size(), options);
    const auto workers = static_cast<std::size_t>(worker_count);

    std::vector<std::string> result_tsv(workers);
    std::vector<std::string> failures(workers);
    std::vector<SessionTiming> sessions(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);

    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            SessionTiming& session = sessions[w];
            try {
                const auto& replicate = replicates[order[w]];
                session.distribute_start = session.distribute_end = Clock::now();
                std::string tsv;
                if (options.external_cmd) {
                    TempDir dir("local_w" + std::to_string(w));
                    const auto target_path = (dir.path() / "target.fa").string();
                    const auto background_path = (dir.path() / "background.fa").string();
                    write_fasta_file(replicate, target_path);
                    write_fasta_file(background, background_path);
                    session.distribute_end = Clock::now();
                    const auto motifs =
                        run_external(*options.external_cmd, target_path, background_path);
                    tsv = write_motif_tsv(motifs);
                } else {
                    const auto motifs = discover(replicate, background, options.engine);
                    tsv = write_motif_tsv(motifs);
                }
                session.result_at = session.gathered_at = Clock::now();
                result_tsv[w] = std::move(tsv);
            } catch (const std::exception& e) {
                session.result_at = session.gathered_at = Clock::now();
                failures[w] = e.what();
            }
        });
    }
    for (auto& thread : threads) thread.join();

    for (std::size_t w = 0; w < workers; ++w) {
        if (!failures[w].empty()) {
            throw RunnerError(RunnerError::Kind::WorkerFailed,
                              "worker " + std::to_string(w) + " failed: " + failures[w]);
        }
    }

    auto dist_start = sessions[0].distribute_start;
    auto dist_end = sessions[0].distribute_end;
    for (const auto& session : sessions) {
        dist_start = std::min(dist_start, session.distribute_start);
        dist_end = std::max(dist_end, session.distribute_end);
    }
    timings.distribute_ms = ms_between(dist_start, dist_end);
    timings.discover_ms.reserve(workers);
    for (const auto& session : sessions) {
        timings.discover_ms.push_back(ms_between(session.distribute_end, session.result_at));
    }

    const auto t_gather = Clock::now();
    std::vector<std::vector<Motif>> lists;
    lists.reserve(workers);
    for (const auto& tsv : result_tsv) lists.push_back(parse_motif_tsv(tsv));
    timings.gather_ms = ms_between(t_gather, Clock::now());

    const auto t_reduce = Clock::now();
    auto outcome = reduce_worker_lists(lists, options);
    timings.reduce_ms = ms_between(t_reduce, Clock::now());
    timings.total_ms = ms_between(t_start, Clock::now());

    return RunResult{std::move(outcome.merged), std::move(outcome.detail), std::move(timings)};
}

namespace {

// One master-side protocol session: ship the job, wait, pull the TSV back.
std::string tcp_session(const WorkerDescriptor& worker, std::size_t index,
                        const std::string& job_id, const std::string& target_fasta,
                        const std::string& background_fasta, const RunOptions& options,
                        SessionTiming& session) {
    Socket control;
    Socket data;
    try {
        control = Socket::connect(worker.host, worker.port_base, options.connect_timeout_ms);
        data = Socket::connect(worker.host, static_cast<std::uint16_t>(worker.port_base + 1),
                               options.connect_timeout_ms);
        write_frame(control, "PING");
        const std::string pong = read_frame(control, options.connect_timeout_ms);
        if (pong != "PONG") {
            throw WireError(WireError::Kind::IoError, "unexpected handshake reply '" + pong + "'");
        }
    } catch (const WireError& e) {
        throw RunnerError(RunnerError::Kind::WorkerUnreachable,
                          "worker " + std::to_string(index) + " (" + worker.name() +
                              ") unreachable: " + e.what());
    }

    try {
        nlohmann::json descriptor{
            {"job_id", job_id},
            {"files",
             {{{"name", "target.fa"}, {"role", "target"}},
              {{"name", "background.fa"}, {"role", "background"}}}},
            {"engine", engine_to_json(options.engine)},
        };
        session.distribute_start = Clock::now();
        write_frame(control, "JOB " + job_id + " " + descriptor.dump());
        write_frame(data, target_fasta);
        write_frame(data, background_fasta);
        session.distribute_end = Clock::now();

        const std::string reply = read_frame(control, options.job_timeout_ms);
        session.result_at = Clock::now();
        if (reply.rfind("RESULT ", 0) == 0) {
            const std::string id = reply.substr(7);
            if (id != job_id) {
                throw WireError(WireError::Kind::IoError, "reply names job '" + id + "'");
            }
        } else if (reply.rfind("ERROR ", 0) == 0) {
            std::string message = reply.substr(6);
            const auto space = message.find(' ');
            if (space != std::string::npos) message = message.substr(space + 1);
            throw RunnerError(RunnerError::Kind::WorkerFailed,
                              "worker " + std::to_string(index) + " (" + worker.name() +
                                  ") failed: " + message);
        } else {
            throw WireError(WireError::Kind::IoError, "unexpected control frame");
        }

        std::string tsv = read_frame(data, options.job_timeout_ms);
        session.gathered_at = Clock::now();
        return tsv;
    } catch (const WireError& e) {
        throw RunnerError(RunnerError::Kind::WorkerFailed,
                          "worker " + std::to_string(index) + " (" + worker.name() +
                              ") session failed: " + e.what());
    }
}

} // namespace

RunResult run_tcp(const std::vector<SequenceRecord>& target,
                  const std::vector<SequenceRecord>& background,
                  const std::vector<WorkerDescriptor>& workers, const RunOptions& options) {
    if (workers.empty()) throw std::invalid_argument("no workers given");
    if (options.external_cmd) {
        throw std::invalid_argument(
            "external engine templates apply to local mode; start TCP workers with an engine "
            "command instead");
    }
    if (options.spec.replicates != workers.size()) {
        throw RunnerError(RunnerError::Kind::ReplicateCountMismatch,
                          "spec.replicates (" + std::to_string(options.spec.replicates) +
                              ") must equal the worker count (" + std::to_string(workers.size()) +
                              ") so that each worker gets one input");
    }

    const auto t_start = Clock::now();
    RunTimings timings;

    auto replicates = generate_replicates(target, options.spec);
    std::vector<std::string> replicate_fasta;
    replicate_fasta.reserve(replicates.size());
    for (const auto& replicate : replicates) {
        replicate_fasta.push_back(write_fasta_string(replicate));
    }
    const std::string background_fasta = write_fasta_string(background);
    timings.subsample_ms = ms_between(t_start, Clock::now());

    const auto order = assignment(workers.size(), options);
    std::vector<std::string> result_tsv(workers.size());
    std::vector<SessionTiming> sessions(workers.size());
    std::vector<std::exception_ptr> errors(workers.size());
    std::vector<std::thread> threads;
    threads.reserve(workers.size());

    for (std::size_t w = 0; w < workers.size(); ++w) {
        threads.emplace_back([&, w]() {
            try {
                result_tsv[w] =
                    tcp_session(workers[w], w, "job" + std::to_string(w),
                                replicate_fasta[order[w]], background_fasta, options, sessions[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& thread : threads) thread.join();
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }

    auto dist_start = sessions[0].distribute_start;
    auto dist_end = sessions[0].distribute_end;
    auto gather_start = sessions[0].result_at;
    auto gather_end = sessions[0].gathered_at;
    for (const auto& session : sessions) {
        dist_start = std::min(dist_start, session.distribute_start);
        dist_end = std::max(dist_end, session.distribute_end);
        gather_start = std::min(gather_start, session.result_at);
        gather_end = std::max(gather_end, session.gathered_at);
    }
    timings.distribute_ms = ms_between(dist_start, dist_end);
    timings.gather_ms = ms_between(gather_start, gather_end);
    for (const auto& session : sessions) {
        timings.discover_ms.push_back(ms_between(session.distribute_end, session.result_at));
    }

    const auto t_reduce = Clock::now();
    std::vector<std::vector<Motif>> lists;
    lists.reserve(result_tsv.size());
    for (const auto& tsv : result_tsv) lists.push_back(parse_motif_tsv(tsv));
    auto outcome = reduce_worker_lists(lists, options);
    timings.reduce_ms = ms_between(t_reduce, Clock::now());
    timings.total_ms = ms_between(t_start, Clock::now());

    return RunResult{std::move(outcome.merged), std::move(outcome.detail), std::move(timings)};
}

std::string timings_to_json(const RunTimings& timings) {
    nlohmann::json j{{"subsample_ms", timings.subsample_ms},
                     {"distribute_ms", timings.distribute_ms},
                     {"discover_ms", timings.discover_ms},
                     {"gather_ms", timings.gather_ms},
                     {"reduce_ms", timings.reduce_ms},
                     {"total_ms", timings.total_ms}};
    return j.dump(2) + "\n";
}

RunTimings timings_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RunTimings timings;
    timings.subsample_ms = j.at("subsample_ms").get<std::int64_t>();
    timings.distribute_ms = j.at("distribute_ms").get<std::int64_t>();
    timings.discover_ms = j.at("discover_ms").get<std::vector<std::int64_t>>();
    timings.gather_ms = j.at("gather_ms").get<std::int64_t>();
    timings.reduce_ms = j.at("reduce_ms").get<std::int64_t>();
    timings.total_ms = j.at("total_ms").get<std::int64_t>();
    return timings;
}

void write_timings_file(const RunTimings& timings, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << timings_to_json(timings);
}

RunTimings read_timings_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return timings_from_json(buf.str());
}

std::vector<WorkerDescriptor> parse_hosts_text(const std::string& text) {
    std::vector<WorkerDescriptor> workers;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.resize(comment);
        std::istringstream fields(line);
        std::string host;
        if (!(fields >> host)) continue;
        long port = 0;
        std::string extra;
        if (!(fields >> port) || (fields >> extra) || port < 1024 || port > 65534) {
            throw std::invalid_argument("hosts file line " + std::to_string(line_no) +
                                        ": expected 'host port_base' with port in [1024, 65534]");
        }
        workers.push_back(WorkerDescriptor{host, static_cast<std::uint16_t>(port)});
    }
    if (workers.empty()) throw std::invalid_argument("hosts file lists no workers");
    return workers;
}

std::vector<WorkerDescriptor> parse_hosts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open hosts file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_hosts_text(buf.str());
}

WorkerServer::WorkerServer(const WorkerConfig& config) : config_(config) {
    try {
        if (config.port_base != 0) {
            if (config.port_base < 1024 || config.port_base > 65534) {
                throw RunnerError(RunnerError::Kind::PortUnavailable,
                                  "port_base must be in [1024, 65534]");
            }
            control_listener_ = Listener::bind(config.host, config.port_base);
            data_listener_ =
                Listener::bind(config.host, static_cast<std::uint16_t>(config.port_base + 1));
            port_base_ = config.port_base;
            return;
        }
        // pick a free consecutive pair
        for (int attempt = 0; attempt < 256; ++attempt) {
            Listener first = Listener::bind(config.host, 0);
            const std::uint16_t base = first.port();
            if (base < 1024 || base > 65534) continue;
            try {
                Listener second =
                    Listener::bind(config.host, static_cast<std::uint16_t>(base + 1));
                control_listener_ = std::move(first);
                data_listener_ = std::move(second);
                port_base_ = base;
                return;
            } catch (const WireError&) {
                continue;
            }
        }
        throw RunnerError(RunnerError::Kind::PortUnavailable,
                          "could not find a free consecutive port pair");
    } catch (const WireError& e) {
        throw RunnerError(RunnerError::Kind::PortUnavailable, e.what());
    }
}

void WorkerServer::serve(const std::atomic<bool>& stop) {
    while (!stop.load(std::memory_order_relaxed)) {
        auto control = control_listener_.accept(200);
        if (!control) continue;
        handle_session(std::move(*control));
    }
}

void WorkerServer::handle_session(Socket control) {
    std::string job_id = "?";
    try {
        while (true) {
            const std::string frame = read_frame(control, 30'000);
            if (frame == "PING") {
                write_frame(control, "PONG");
                continue;
            }
            if (frame.rfind("JOB ", 0) != 0) {
                write_frame(control, "ERROR ? malformed control frame");
                return;
            }

            const auto json_at = frame.find(' ', 4);
            if (json_at == std::string::npos) {
                write_frame(control, "ERROR ? malformed JOB frame");
                return;
            }
            job_id = frame.substr(4, json_at - 4);
            const auto descriptor = nlohmann::json::parse(frame.substr(json_at + 1));
            const auto engine = engine_from_json(descriptor.at("engine"));

            auto data = data_listener_.accept(30'000);
            if (!data) {
                std::cerr << "[worker] no data connection for " << job_id << "\n";
                return;
            }

            TempDir dir("worker_job" + std::to_string(jobs_handled_++));
            std::string target_path;
            std::string background_path;
            for (const auto& file : descriptor.at("files")) {
                const auto name = file.at("name").get<std::string>();
                if (name.find('/') != std::string::npos || name.find("..") != std::string::npos) {
                    throw std::invalid_argument("illegal file name '" + name + "'");
                }
                const std::string content = read_frame(*data, 60'000);
                const auto path = (dir.path() / name).string();
                std::ofstream out(path, std::ios::binary);
                out << content;
                if (!out) throw std::runtime_error("short write to " + path);
                const auto role = file.at("role").get<std::string>();
                if (role == "target") target_path = path;
                if (role == "background") background_path = path;
            }
            if (target_path.empty() || background_path.empty()) {
                throw std::invalid_argument("job descriptor lacks target/background roles");
            }

            std::vector<Motif> motifs;
            if (config_.engine_cmd) {
                motifs = run_external(*config_.engine_cmd, target_path, background_path);
            } else {
                motifs = discover(parse_fasta_file(target_path), parse_fasta_file(background_path),
                                  engine);
            }
            const std::string tsv = write_motif_tsv(motifs);
            write_frame(control, "RESULT " + job_id);
            write_frame(*data, tsv);
            return;
        }
    } catch (const std::exception& e) {
        std::cerr << "[worker] job " << job_id << " failed: " << e.what() << "\n";
        try {
            write_frame(control, "ERROR " + job_id + " " + e.what());
        } catch (const WireError&) {
            // peer already gone
        }
    }
}

} // namespace sgm
