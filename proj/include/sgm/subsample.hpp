#ifndef SGM_SUBSAMPLE_HPP
#define SGM_SUBSAMPLE_HPP

#include <cstdint>
#include <vector>

#include "sgm/fasta.hpp"
#include "sgm/rng.hpp"

namespace sgm {

struct SubsampleSpec {
    int percent = 100;             // [1, 100]
    std::uint32_t replicates = 1;  // one per worker at orchestration time
    std::uint64_t seed = 0;
};

// One contiguous window of floor(len * percent / 100) residues (minimum 1),
// start drawn uniformly from the valid range. Header and line_width carry over.
SequenceRecord subsample_record(const SequenceRecord& record, int percent, Rng& draw);

// spec.replicates independent sub-sampled copies of `records`. Replicate i
// draws from a stream derived from (spec.seed, i), so outputs are a pure
// function of (records, spec) and replicates can be produced in any order.
std::vector<std::vector<SequenceRecord>> generate_replicates(
    const std::vector<SequenceRecord>& records, const SubsampleSpec& spec);

} // namespace sgm

#endif
