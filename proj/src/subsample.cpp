#include "sgm/subsample.hpp"

#include <stdexcept>
#include <string>

namespace sgm {

SequenceRecord subsample_record(const SequenceRecord& record, int percent, Rng& draw) {
    if (percent < 1 || percent > 100) {
        throw std::invalid_argument("percent must be in [1,100], got " + std::to_string(percent));
    }
    const auto len = static_cast<std::uint64_t>(record.residues.size());
    std::uint64_t window = len * static_cast<std::uint64_t>(percent) / 100;
    if (window < 1) window = 1;

    const std::uint64_t start = draw.next_below(len - window + 1);
    SequenceRecord out;
    out.header = record.header;
    out.line_width = record.line_width;
    out.residues = record.residues.substr(static_cast<std::size_t>(start),
                                          static_cast<std::size_t>(window));
    return out;
}

std::vector<std::vector<SequenceRecord>> generate_replicates(
    const std::vector<SequenceRecord>& records, const SubsampleSpec& spec) {
    if (records.empty()) throw std::invalid_argument("no input records to sub-sample");
    if (spec.percent < 1 || spec.percent > 100) {
        throw std::invalid_argument("percent must be in [1,100]");
    }
    if (spec.replicates < 1) throw std::invalid_argument("replicates must be >= 1");

    std::vector<std::vector<SequenceRecord>> replicates;
    replicates.reserve(spec.replicates);
    for (std::uint32_t i = 0; i < spec.replicates; ++i) {
        Rng stream = derive_stream(spec.seed, i);
        std::vector<SequenceRecord> out;
        out.reserve(records.size());
        for (const auto& record : records) {
            out.push_back(subsample_record(record, spec.percent, stream));
        }
        replicates.push_back(std::move(out));
    }
    return replicates;
}

} // namespace sgm
