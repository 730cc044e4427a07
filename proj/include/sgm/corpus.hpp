#ifndef SGM_CORPUS_HPP
#define SGM_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgm/fasta.hpp"

namespace sgm {

// Synthetic planted-motif corpus: random sequences with a known motif
// written into a seeded subset, plus a scrambled background.
struct CorpusSpec {
    int sequences = 100;
    int length = 1000;
    std::string motif = "ACGTACGT";
    double plant_fraction = 0.6;
    std::uint64_t seed = 0;
    std::size_t line_width = 70;
};

struct Corpus {
    std::vector<SequenceRecord> target;
    std::vector<SequenceRecord> background;
};

Corpus make_corpus(const CorpusSpec& spec);

} // namespace sgm

#endif
