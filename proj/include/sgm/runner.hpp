#ifndef SGM_RUNNER_HPP
#define SGM_RUNNER_HPP

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgm/fasta.hpp"
#include "sgm/motif.hpp"
#include "sgm/reduce.hpp"
#include "sgm/runner_types.hpp"
#include "sgm/subsample.hpp"
#include "sgm/wire.hpp"

namespace sgm {

class RunnerError : public std::runtime_error {
public:
    enum class Kind { WorkerUnreachable, WorkerFailed, ReplicateCountMismatch, PortUnavailable };

    RunnerError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct RunOptions {
    SubsampleSpec spec;
    EngineConfig engine;
    // Local mode may run each worker's discovery through an external command
    // template instead of the built-in engine. TCP workers choose their own
    // engine (see WorkerConfig::engine_cmd), so this is rejected in TCP mode.
    std::optional<std::string> external_cmd;
    int report_cap = 0; // 0 -> lengths * per_length
    int min_support = 1;
    // Replicates are assigned to workers by index; this flag restores the
    // randomized pick (seeded, still one distinct replicate per worker).
    bool random_assignment = false;
    int connect_timeout_ms = 10'000;
    int job_timeout_ms = 3'600'000;
};

struct RunResult {
    std::vector<Motif> merged;        // reduce output, sorted ascending by lnP
    std::vector<MergedMotif> detail;  // reduce output in mode order, with provenance
    RunTimings timings;
};

// Scatter-gather run with in-process workers (one parallel job per worker).
RunResult run_local(const std::vector<SequenceRecord>& target,
                    const std::vector<SequenceRecord>& background, int worker_count,
                    const RunOptions& options);

// Scatter-gather run over TCP workers. Requires spec.replicates ==
// workers.size(); the merged result is deterministic regardless of worker
// completion order.
RunResult run_tcp(const std::vector<SequenceRecord>& target,
                  const std::vector<SequenceRecord>& background,
                  const std::vector<WorkerDescriptor>& workers, const RunOptions& options);

struct WorkerConfig {
    std::string host = "0.0.0.0";
    std::uint16_t port_base = 0; // 0 -> pick a free consecutive pair
    std::optional<std::string> engine_cmd;
};

// One-job-at-a-time protocol server: control frames on port_base, file
// frames on port_base + 1.
class WorkerServer {
public:
    explicit WorkerServer(const WorkerConfig& config);

    std::uint16_t port_base() const { return port_base_; }

    // Serves jobs until `stop` becomes true.
    void serve(const std::atomic<bool>& stop);

private:
    void handle_session(Socket control);

    WorkerConfig config_;
    Listener control_listener_;
    Listener data_listener_;
    std::uint16_t port_base_ = 0;
    std::uint64_t jobs_handled_ = 0;
};

} // namespace sgm

#endif
