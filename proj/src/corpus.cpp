#include "sgm/corpus.hpp"

#include <cmath>
#include <stdexcept>

#include "sgm/rng.hpp"
#include "sgm/scramble.hpp"

namespace sgm {

Corpus make_corpus(const CorpusSpec& spec) {
    if (spec.sequences < 1) throw std::invalid_argument("corpus needs at least one sequence");
    if (spec.length < 1) throw std::invalid_argument("sequence length must be >= 1");
    if (spec.plant_fraction < 0.0 || spec.plant_fraction > 1.0) {
        throw std::invalid_argument("plant fraction must be in [0,1]");
    }
    if (!spec.motif.empty() && spec.motif.size() > static_cast<std::size_t>(spec.length)) {
        throw std::invalid_argument("motif longer than the sequences");
    }
    for (char c : spec.motif) {
        if (c != 'A' && c != 'C' && c != 'G' && c != 'T') {
            throw std::invalid_argument("motif must be over {A,C,G,T}");
        }
    }

    static constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
    Rng rng = derive_stream(spec.seed, 0xc0'9b5ULL);

    Corpus corpus;
    corpus.target.reserve(spec.sequences);
    for (int i = 0; i < spec.sequences; ++i) {
        SequenceRecord record;
        record.header = "seq_" + std::to_string(i);
        record.line_width = spec.line_width;
        record.residues.resize(static_cast<std::size_t>(spec.length));
        for (auto& c : record.residues) c = kBases[rng.next_below(4)];
        corpus.target.push_back(std::move(record));
    }

    // plant into a random subset of round(fraction * n) sequences
    const auto plant_count = static_cast<int>(
        std::lround(spec.plant_fraction * static_cast<double>(spec.sequences)));
    if (!spec.motif.empty() && plant_count > 0) {
        std::vector<int> indices(static_cast<std::size_t>(spec.sequences));
        for (int i = 0; i < spec.sequences; ++i) indices[static_cast<std::size_t>(i)] = i;
        for (std::size_t i = indices.size(); i > 1; --i) {
            std::swap(indices[i - 1], indices[static_cast<std::size_t>(rng.next_below(i))]);
        }
        for (int p = 0; p < plant_count; ++p) {
            auto& residues = corpus.target[static_cast<std::size_t>(indices[p])].residues;
            const auto at = static_cast<std::size_t>(
                rng.next_below(residues.size() - spec.motif.size() + 1));
            residues.replace(at, spec.motif.size(), spec.motif);
        }
    }

    corpus.background = scramble(corpus.target, splitmix64(spec.seed ^ 0xb6'0bacULL),
                                 ScrambleMode::Mononucleotide);
    return corpus;
}

} // namespace sgm
