#ifndef SGM_MOTIF_HPP
#define SGM_MOTIF_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgm/fasta.hpp"

namespace sgm {

// One discovered candidate. ln_p is quantized to the 4-decimal value the TSV
// format prints, so ordering and merging are stable across a serialize/parse
// cycle (worker results always travel as TSV).
struct Motif {
    int length = 0;
    std::string consensus;
    std::int64_t target_containing = 0;
    std::int64_t target_total = 0;
    std::int64_t bg_containing = 0;
    std::int64_t bg_total = 0;
    double ln_p = 0.0;

    bool operator==(const Motif&) const = default;
};

struct EngineConfig {
    std::vector<int> lengths = {8, 10, 12};
    int per_length = 25;
    bool both_strands = true;
    int redundancy_hamming = 1;
};

class MotifError : public std::runtime_error {
public:
    enum class Kind { EmptyTarget, EmptyBackground, CommandFailed, UnparseableOutput };

    MotifError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

std::string reverse_complement(const std::string& kmer);

// Number of sequences containing each k-mer at least once (ZOOPS). Windows
// containing 'N' are skipped. With both_strands, a k-mer and its reverse
// complement are folded onto the lexicographically smaller of the pair.
std::map<std::string, std::int64_t> count_kmers(const std::vector<SequenceRecord>& records,
                                                int k, bool both_strands);

// Enrichment-based discovery: every canonical k-mer seen in the target is
// scored by the hypergeometric tail of its target-vs-background sequence
// counts; per length the best-scoring non-redundant cfg.per_length motifs
// survive, and the concatenation is sorted ascending by (ln_p, length,
// consensus). Deterministic.
std::vector<Motif> discover(const std::vector<SequenceRecord>& target,
                            const std::vector<SequenceRecord>& background,
                            const EngineConfig& cfg);

// Runs an external discovery command. The template must contain {target},
// {background} and {out} placeholders; the command's {out} file is read back
// as motif TSV with scores kept verbatim.
std::vector<Motif> run_external(const std::string& command_template,
                                const std::string& target_path,
                                const std::string& background_path);

// Motif TSV: "#rank\tlength\tconsensus\ttarget_containing\ttarget_total\t
// bg_containing\tbg_total\tlnP", rank from 1, lnP with exactly 4 decimals,
// '\n' endings.
std::string write_motif_tsv(const std::vector<Motif>& motifs);
std::vector<Motif> parse_motif_tsv(const std::string& text);
void write_motif_tsv_file(const std::vector<Motif>& motifs, const std::string& path);
std::vector<Motif> parse_motif_tsv_file(const std::string& path);

} // namespace sgm

#endif
