#ifndef SGM_RUNNER_TYPES_HPP
#define SGM_RUNNER_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sgm {

// One worker endpoint: control on port_base, data on port_base + 1.
struct WorkerDescriptor {
    std::string host;
    std::uint16_t port_base = 0;

    std::string name() const { return host + ":" + std::to_string(port_base); }
};

// Wall-clock phase durations of one distributed run, in milliseconds.
// Phases may overlap across workers, so total is only guaranteed to be
// >= each individual phase.
struct RunTimings {
    std::int64_t subsample_ms = 0;
    std::int64_t distribute_ms = 0;
    std::vector<std::int64_t> discover_ms; // one entry per worker
    std::int64_t gather_ms = 0;
    std::int64_t reduce_ms = 0;
    std::int64_t total_ms = 0;
};

std::string timings_to_json(const RunTimings& timings);
RunTimings timings_from_json(const std::string& text);
void write_timings_file(const RunTimings& timings, const std::string& path);
RunTimings read_timings_file(const std::string& path);

// Hosts file: one `host port_base` per line, '#' comments and blank lines
// allowed. port_base must be in [1024, 65534].
std::vector<WorkerDescriptor> parse_hosts_file(const std::string& path);
std::vector<WorkerDescriptor> parse_hosts_text(const std::string& text);

} // namespace sgm

#endif
