#include "sgm/reduce.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sgm {

std::vector<MergedMotif> reduce_mode(const std::vector<std::vector<Motif>>& lists,
                                     int report_cap, int min_support) {
    if (lists.empty()) throw std::invalid_argument("no worker lists to reduce");
    if (report_cap < 1) throw std::invalid_argument("report_cap must be >= 1");
    if (min_support < 1) throw std::invalid_argument("min_support must be >= 1");

    std::map<std::pair<int, std::string>, MergedMotif> groups;
    for (std::size_t worker = 0; worker < lists.size(); ++worker) {
        for (const Motif& m : lists[worker]) {
            auto [it, inserted] = groups.try_emplace({m.length, m.consensus});
            MergedMotif& g = it->second;
            if (inserted) {
                g.motif = m;
            } else if (m.ln_p < g.motif.ln_p) {
                g.motif = m;
            }
            // A list may mention an identity more than once (external
            // engines); it still counts as one supporting worker.
            if (g.workers.empty() || g.workers.back() != static_cast<int>(worker)) {
                g.workers.push_back(static_cast<int>(worker));
                ++g.support;
            }
        }
    }

    std::vector<MergedMotif> merged;
    merged.reserve(groups.size());
    for (auto& [key, g] : groups) {
        if (g.support >= min_support) merged.push_back(std::move(g));
    }
    std::sort(merged.begin(), merged.end(), [](const MergedMotif& a, const MergedMotif& b) {
        if (a.support != b.support) return a.support > b.support;
        if (a.motif.ln_p != b.motif.ln_p) return a.motif.ln_p < b.motif.ln_p;
        if (a.motif.length != b.motif.length) return a.motif.length < b.motif.length;
        return a.motif.consensus < b.motif.consensus;
    });
    if (merged.size() > static_cast<std::size_t>(report_cap)) {
        merged.resize(static_cast<std::size_t>(report_cap));
    }
    return merged;
}

std::vector<Motif> merged_to_motifs(const std::vector<MergedMotif>& merged) {
    std::vector<Motif> out;
    out.reserve(merged.size());
    for (const auto& m : merged) out.push_back(m.motif);
    std::sort(out.begin(), out.end(), [](const Motif& a, const Motif& b) {
        if (a.ln_p != b.ln_p) return a.ln_p < b.ln_p;
        if (a.length != b.length) return a.length < b.length;
        return a.consensus < b.consensus;
    });
    return out;
}

std::string write_merged_tsv(const std::vector<MergedMotif>& merged) {
    std::ostringstream out;
    out << "#rank\tlength\tconsensus\ttarget_containing\ttarget_total\t"
           "bg_containing\tbg_total\tlnP\tsupport\tworkers\n";
    char lnp[64];
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const Motif& m = merged[i].motif;
        std::snprintf(lnp, sizeof(lnp), "%.4f", m.ln_p);
        out << (i + 1) << '\t' << m.length << '\t' << m.consensus << '\t' << m.target_containing
            << '\t' << m.target_total << '\t' << m.bg_containing << '\t' << m.bg_total << '\t'
            << lnp << '\t' << merged[i].support << '\t';
        for (std::size_t w = 0; w < merged[i].workers.size(); ++w) {
            if (w) out << ',';
            out << merged[i].workers[w];
        }
        out << '\n';
    }
    return out.str();
}

void write_merged_tsv_file(const std::vector<MergedMotif>& merged, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << write_merged_tsv(merged);
}

} // namespace sgm
