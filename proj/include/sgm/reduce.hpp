#ifndef SGM_REDUCE_HPP
#define SGM_REDUCE_HPP

#include <string>
#include <vector>

#include "sgm/motif.hpp"

namespace sgm {

// A motif after the mode-merge. support = number of worker lists containing
// the identity (length, consensus); ln_p and counts come from the supporting
// worker with the best ln_p; workers lists the supporting indices ascending.
struct MergedMotif {
    Motif motif;
    int support = 0;
    std::vector<int> workers;
};

// Frequency merge of per-worker motif lists: group by (length, consensus),
// order by (support desc, ln_p asc, length asc, consensus asc), drop entries
// below min_support, truncate to report_cap. Permutation-invariant over the
// worker order.
std::vector<MergedMotif> reduce_mode(const std::vector<std::vector<Motif>>& lists,
                                     int report_cap, int min_support = 1);

// The merged list as plain motifs re-sorted ascending by (ln_p, length,
// consensus) — the order the motif TSV contract requires.
std::vector<Motif> merged_to_motifs(const std::vector<MergedMotif>& merged);

// Merged motif TSV: the motif TSV columns plus `support` and `workers`
// (comma-separated indices), rows in reduce_mode order.
std::string write_merged_tsv(const std::vector<MergedMotif>& merged);
void write_merged_tsv_file(const std::vector<MergedMotif>& merged, const std::string& path);

} // namespace sgm

#endif
