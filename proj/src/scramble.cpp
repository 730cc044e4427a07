#include "sgm/scramble.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>

namespace sgm {

namespace {

constexpr int kAlphabet = 5; // A C G T N

int symbol_index(char c) {
    switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    case 'N': return 4;
    default:
        throw std::invalid_argument(std::string("non-residue character '") + c + "'");
    }
}

constexpr char kSymbols[kAlphabet] = {'A', 'C', 'G', 'T', 'N'};

template <typename T>
void fisher_yates(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[static_cast<std::size_t>(rng.next_below(i))]);
    }
}

} // namespace

// Altschul-Erickson style doublet-preserving shuffle: edges of the symbol
// multigraph are the adjacent pairs of the input; a uniformly drawn set of
// per-vertex exit edges that forms a tree into the terminal symbol is
// reserved to be consumed last, the remaining out-edges are shuffled, and
// the Eulerian walk from the first symbol reads off the output.
std::string dinucleotide_shuffle(const std::string& residues, Rng& rng) {
    const std::size_t n = residues.size();
    if (n <= 2) return residues;

    std::array<std::vector<int>, kAlphabet> adjacency;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        adjacency[symbol_index(residues[i])].push_back(symbol_index(residues[i + 1]));
    }
    const int start = symbol_index(residues.front());
    const int terminal = symbol_index(residues.back());

    // Reserve one exit edge per non-terminal vertex such that following the
    // reserved edges always reaches the terminal. The original sequence's own
    // last exits form one valid assignment, so the rejection loop terminates.
    std::array<int, kAlphabet> reserved_target{};
    std::array<std::size_t, kAlphabet> reserved_slot{};
    while (true) {
        bool all_reach = true;
        for (int v = 0; v < kAlphabet; ++v) {
            if (v == terminal || adjacency[v].empty()) continue;
            const auto pick = static_cast<std::size_t>(rng.next_below(adjacency[v].size()));
            reserved_slot[v] = pick;
            reserved_target[v] = adjacency[v][pick];
        }
        for (int v = 0; v < kAlphabet && all_reach; ++v) {
            if (v == terminal || adjacency[v].empty()) continue;
            int cur = v;
            int hops = 0;
            while (cur != terminal && hops <= kAlphabet) {
                cur = reserved_target[cur];
                ++hops;
            }
            if (cur != terminal) all_reach = false;
        }
        if (all_reach) break;
    }

    // Per-vertex edge order: shuffled free edges, reserved exit last.
    std::array<std::vector<int>, kAlphabet> ordered;
    for (int v = 0; v < kAlphabet; ++v) {
        if (adjacency[v].empty()) continue;
        std::vector<int> edges = adjacency[v];
        int last = -1;
        if (v != terminal) {
            last = reserved_target[v];
            edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(reserved_slot[v]));
        }
        fisher_yates(edges, rng);
        if (last >= 0) edges.push_back(last);
        ordered[v] = std::move(edges);
    }

    std::string out;
    out.reserve(n);
    out.push_back(kSymbols[start]);
    std::array<std::size_t, kAlphabet> cursor{};
    int cur = start;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        const int next = ordered[cur][cursor[cur]++];
        out.push_back(kSymbols[next]);
        cur = next;
    }
    return out;
}

std::vector<SequenceRecord> scramble(const std::vector<SequenceRecord>& records,
                                     std::uint64_t seed, ScrambleMode mode) {
    if (records.empty()) throw std::invalid_argument("no input records to scramble");

    std::vector<SequenceRecord> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(records[i]);
        Rng stream = derive_stream(seed, i);
        SequenceRecord bg;
        bg.header = records[i].header + "_bg";
        bg.line_width = records[i].line_width;
        if (mode == ScrambleMode::Mononucleotide) {
            std::string residues = records[i].residues;
            for (std::size_t j = residues.size(); j > 1; --j) {
                std::swap(residues[j - 1], residues[static_cast<std::size_t>(stream.next_below(j))]);
            }
            bg.residues = std::move(residues);
        } else {
            bg.residues = dinucleotide_shuffle(records[i].residues, stream);
        }
        out.push_back(std::move(bg));
    }
    return out;
}

} // namespace sgm
