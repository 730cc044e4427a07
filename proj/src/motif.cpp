#include "sgm/motif.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <unordered_map>

#include "sgm/stats.hpp"

namespace sgm {

namespace {

constexpr int kBaseBits = 2;

int base_code(char c) {
    switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1; // N or invalid: no code
    }
}

constexpr char kBases[4] = {'A', 'C', 'G', 'T'};

std::string decode_kmer(std::uint64_t code, int k) {
    std::string out(static_cast<std::size_t>(k), 'A');
    for (int i = k - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kBases[code & 3u];
        code >>= kBaseBits;
    }
    return out;
}

std::uint64_t reverse_complement_code(std::uint64_t code, int k) {
    std::uint64_t rc = 0;
    for (int i = 0; i < k; ++i) {
        rc = (rc << kBaseBits) | (3u - (code & 3u));
        code >>= kBaseBits;
    }
    return rc;
}

int hamming_codes(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ b;
    x = (x | (x >> 1)) & 0x5555555555555555ULL;
    return static_cast<int>(__builtin_popcountll(x));
}

// Distinct (canonical) k-mer codes of one sequence, N-windows skipped.
void sequence_kmer_codes(const std::string& seq, int k, bool both_strands,
                         std::vector<std::uint64_t>& out) {
    out.clear();
    const std::size_t n = seq.size();
    if (n < static_cast<std::size_t>(k)) return;

    const std::uint64_t mask =
        (k * kBaseBits == 64) ? ~0ULL : ((1ULL << (k * kBaseBits)) - 1);
    const int rc_shift = (k - 1) * kBaseBits;
    std::uint64_t fwd = 0;
    std::uint64_t rc = 0;
    int valid = 0; // consecutive coded bases ending at current position

    for (std::size_t i = 0; i < n; ++i) {
        const int code = base_code(seq[i]);
        if (code < 0) {
            valid = 0;
            continue;
        }
        fwd = ((fwd << kBaseBits) | static_cast<std::uint64_t>(code)) & mask;
        rc = (rc >> kBaseBits) |
             (static_cast<std::uint64_t>(3 - code) << rc_shift);
        if (++valid >= k) {
            out.push_back(both_strands ? std::min(fwd, rc) : fwd);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::unordered_map<std::uint64_t, std::int64_t> count_kmer_codes(
    const std::vector<SequenceRecord>& records, int k, bool both_strands) {
    std::unordered_map<std::uint64_t, std::int64_t> counts;
    std::vector<std::uint64_t> codes;
    for (const auto& record : records) {
        sequence_kmer_codes(record.residues, k, both_strands, codes);
        for (std::uint64_t code : codes) ++counts[code];
    }
    return counts;
}

// The 4-decimal value the TSV prints; all ranking happens on this.
double quantize_ln_p(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return std::strtod(buf, nullptr);
}

struct Candidate {
    double ln_p;
    std::uint64_t code;
    std::int64_t target_containing;
    std::int64_t bg_containing;
};

bool motif_order(const Motif& a, const Motif& b) {
    if (a.ln_p != b.ln_p) return a.ln_p < b.ln_p;
    if (a.length != b.length) return a.length < b.length;
    return a.consensus < b.consensus;
}

} // namespace

std::string reverse_complement(const std::string& kmer) {
    std::string out(kmer.rbegin(), kmer.rend());
    for (char& c : out) {
        switch (c) {
        case 'A': c = 'T'; break;
        case 'C': c = 'G'; break;
        case 'G': c = 'C'; break;
        case 'T': c = 'A'; break;
        case 'N': break;
        default:
            throw std::invalid_argument(std::string("non-residue character '") + c + "'");
        }
    }
    return out;
}

std::map<std::string, std::int64_t> count_kmers(const std::vector<SequenceRecord>& records,
                                                int k, bool both_strands) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > 31) throw std::invalid_argument("k must be <= 31");
    std::map<std::string, std::int64_t> out;
    for (const auto& [code, count] : count_kmer_codes(records, k, both_strands)) {
        out.emplace(decode_kmer(code, k), count);
    }
    return out;
}

std::vector<Motif> discover(const std::vector<SequenceRecord>& target,
                            const std::vector<SequenceRecord>& background,
                            const EngineConfig& cfg) {
    if (target.empty()) throw MotifError(MotifError::Kind::EmptyTarget, "empty target set");
    if (background.empty()) {
        throw MotifError(MotifError::Kind::EmptyBackground, "empty background set");
    }
    if (cfg.lengths.empty()) throw std::invalid_argument("no motif lengths configured");
    for (int k : cfg.lengths) {
        if (k < 4 || k > 31) throw std::invalid_argument("motif lengths must be in [4,31]");
    }
    if (cfg.per_length < 1) throw std::invalid_argument("per_length must be >= 1");
    if (cfg.redundancy_hamming < 0) throw std::invalid_argument("redundancy_hamming must be >= 0");

    const auto target_total = static_cast<std::int64_t>(target.size());
    const auto bg_total = static_cast<std::int64_t>(background.size());
    const LogFactorial lf(static_cast<std::size_t>(target_total + bg_total));

    std::vector<Motif> report;
    for (int k : cfg.lengths) {
        const auto target_counts = count_kmer_codes(target, k, cfg.both_strands);
        const auto bg_counts = count_kmer_codes(background, k, cfg.both_strands);

        std::vector<Candidate> candidates;
        candidates.reserve(target_counts.size());
        for (const auto& [code, tc] : target_counts) {
            const auto bg_it = bg_counts.find(code);
            const std::int64_t bc = bg_it == bg_counts.end() ? 0 : bg_it->second;
            EnrichmentInput input{target_total + bg_total, target_total, tc + bc, tc};
            candidates.push_back(
                Candidate{quantize_ln_p(log_hypergeom_tail(input, lf)), code, tc, bc});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.ln_p != b.ln_p) return a.ln_p < b.ln_p;
            return a.code < b.code;
        });

        std::vector<std::uint64_t> selected;
        for (const auto& candidate : candidates) {
            if (static_cast<int>(selected.size()) >= cfg.per_length) break;
            bool redundant = false;
            for (std::uint64_t other : selected) {
                if (hamming_codes(candidate.code, other) <= cfg.redundancy_hamming ||
                    (cfg.both_strands &&
                     hamming_codes(candidate.code, reverse_complement_code(other, k)) <=
                         cfg.redundancy_hamming)) {
                    redundant = true;
                    break;
                }
            }
            if (redundant) continue;
            selected.push_back(candidate.code);
            report.push_back(Motif{k, decode_kmer(candidate.code, k), candidate.target_containing,
                                   target_total, candidate.bg_containing, bg_total,
                                   candidate.ln_p});
        }
    }

    std::sort(report.begin(), report.end(), motif_order);
    return report;
}

std::string write_motif_tsv(const std::vector<Motif>& motifs) {
    std::ostringstream out;
    out << "#rank\tlength\tconsensus\ttarget_containing\ttarget_total\t"
           "bg_containing\tbg_total\tlnP\n";
    char lnp[64];
    for (std::size_t i = 0; i < motifs.size(); ++i) {
        const Motif& m = motifs[i];
        std::snprintf(lnp, sizeof(lnp), "%.4f", m.ln_p);
        out << (i + 1) << '\t' << m.length << '\t' << m.consensus << '\t' << m.target_containing
            << '\t' << m.target_total << '\t' << m.bg_containing << '\t' << m.bg_total << '\t'
            << lnp << '\n';
    }
    return out.str();
}

namespace {

const std::array<std::string, 8> kTsvColumns = {
    "#rank",           "length",       "consensus", "target_containing",
    "target_total",    "bg_containing", "bg_total",  "lnP"};

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

std::int64_t parse_count(const std::string& field, const std::string& column, std::size_t line_no) {
    std::size_t consumed = 0;
    std::int64_t value = 0;
    try {
        value = std::stoll(field, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != field.size() || value < 0) {
        throw MotifError(MotifError::Kind::UnparseableOutput,
                         "line " + std::to_string(line_no) + ": bad value '" + field +
                             "' in column " + column);
    }
    return value;
}

} // namespace

std::vector<Motif> parse_motif_tsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw MotifError(MotifError::Kind::UnparseableOutput, "empty motif TSV");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        const auto header = split_tabs(line);
        for (std::size_t i = 0; i < kTsvColumns.size(); ++i) {
            if (i >= header.size() || header[i] != kTsvColumns[i]) {
                throw MotifError(MotifError::Kind::UnparseableOutput,
                                 "motif TSV header missing column " + kTsvColumns[i]);
            }
        }
    }

    std::vector<Motif> motifs;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() < kTsvColumns.size()) {
            throw MotifError(MotifError::Kind::UnparseableOutput,
                             "line " + std::to_string(line_no) + ": missing column " +
                                 kTsvColumns[fields.size()]);
        }
        Motif m;
        m.length = static_cast<int>(parse_count(fields[1], "length", line_no));
        m.consensus = fields[2];
        if (m.consensus.empty() || m.consensus.size() != static_cast<std::size_t>(m.length)) {
            throw MotifError(MotifError::Kind::UnparseableOutput,
                             "line " + std::to_string(line_no) + ": consensus/length mismatch");
        }
        for (char c : m.consensus) {
            if (base_code(c) < 0) {
                throw MotifError(MotifError::Kind::UnparseableOutput,
                                 "line " + std::to_string(line_no) + ": bad consensus character");
            }
        }
        m.target_containing = parse_count(fields[3], "target_containing", line_no);
        m.target_total = parse_count(fields[4], "target_total", line_no);
        m.bg_containing = parse_count(fields[5], "bg_containing", line_no);
        m.bg_total = parse_count(fields[6], "bg_total", line_no);
        char* end = nullptr;
        m.ln_p = std::strtod(fields[7].c_str(), &end);
        if (end == fields[7].c_str() || *end != '\0' || m.ln_p > 0.0) {
            throw MotifError(MotifError::Kind::UnparseableOutput,
                             "line " + std::to_string(line_no) + ": bad value '" + fields[7] +
                                 "' in column lnP");
        }
        motifs.push_back(std::move(m));
    }
    return motifs;
}

void write_motif_tsv_file(const std::vector<Motif>& motifs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw MotifError(MotifError::Kind::UnparseableOutput,
                         "cannot open '" + path + "' for writing");
    }
    out << write_motif_tsv(motifs);
}

std::vector<Motif> parse_motif_tsv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MotifError(MotifError::Kind::UnparseableOutput, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_motif_tsv(buf.str());
}

std::vector<Motif> run_external(const std::string& command_template,
                                const std::string& target_path,
                                const std::string& background_path) {
    for (const char* placeholder : {"{target}", "{background}", "{out}"}) {
        if (command_template.find(placeholder) == std::string::npos) {
            throw std::invalid_argument(std::string("command template missing ") + placeholder);
        }
    }

    static std::atomic<unsigned> counter{0};
    const auto out_path =
        (std::filesystem::temp_directory_path() /
         ("sgmotif_ext_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".tsv"))
            .string();

    std::string command = command_template;
    const auto substitute = [&command](const std::string& token, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = command.find(token, pos)) != std::string::npos) {
            command.replace(pos, token.size(), value);
            pos += value.size();
        }
    };
    substitute("{target}", target_path);
    substitute("{background}", background_path);
    substitute("{out}", out_path);

    std::string diagnostics;
    FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
    if (!pipe) {
        throw MotifError(MotifError::Kind::CommandFailed, "cannot launch: " + command);
    }
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
        diagnostics.append(buf, got);
    }
    const int status = ::pclose(pipe);
    const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (exit_code != 0) {
        std::error_code ec;
        std::filesystem::remove(out_path, ec);
        throw MotifError(MotifError::Kind::CommandFailed,
                         "command exited with status " + std::to_string(exit_code) + ": " +
                             command + (diagnostics.empty() ? "" : "\n" + diagnostics));
    }

    try {
        auto motifs = parse_motif_tsv_file(out_path);
        std::error_code ec;
        std::filesystem::remove(out_path, ec);
        return motifs;
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(out_path, ec);
        throw;
    }
}

} // namespace sgm
