#ifndef SGM_SCRAMBLE_HPP
#define SGM_SCRAMBLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgm/fasta.hpp"
#include "sgm/rng.hpp"

namespace sgm {

enum class ScrambleMode {
    Mononucleotide, // uniform permutation; composition preserved exactly
    Dinucleotide,   // Eulerian-walk shuffle; all 16 dinucleotide counts preserved
};

// Shuffle of `residues` preserving every dinucleotide count over the linear
// sequence; the walk starts on the original first symbol and ends on the
// original last symbol.
std::string dinucleotide_shuffle(const std::string& residues, Rng& rng);

// One scrambled record per input: same length, same line_width, header
// suffixed "_bg". Record i draws from a stream derived from (seed, i).
std::vector<SequenceRecord> scramble(const std::vector<SequenceRecord>& records,
                                     std::uint64_t seed, ScrambleMode mode);

} // namespace sgm

#endif
