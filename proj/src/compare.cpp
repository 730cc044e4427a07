#include "sgm/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sgm {

namespace {

using Identity = std::pair<int, std::string>;

std::vector<Identity> identities(const std::vector<Motif>& list) {
    std::vector<Identity> out;
    out.reserve(list.size());
    std::set<Identity> seen;
    for (const Motif& m : list) {
        Identity id{m.length, m.consensus};
        if (seen.insert(id).second) out.push_back(std::move(id));
    }
    return out;
}

void check_sorted(const std::vector<Motif>& list, const char* which) {
    for (std::size_t i = 1; i < list.size(); ++i) {
        if (list[i].ln_p < list[i - 1].ln_p) {
            throw CompareError(CompareError::Kind::UnsortedInput,
                               std::string("list ") + which + " is not sorted ascending by lnP (row " +
                                   std::to_string(i + 1) + ")");
        }
    }
}

} // namespace

ComparisonReport compare(const std::vector<Motif>& a, const std::vector<Motif>& b,
                         const std::vector<int>& ks) {
    check_sorted(a, "a");
    check_sorted(b, "b");

    const auto ids_a = identities(a);
    const auto ids_b = identities(b);
    const std::set<Identity> set_b(ids_b.begin(), ids_b.end());
    const std::set<Identity> set_a(ids_a.begin(), ids_a.end());

    ComparisonReport report;
    report.a_total = static_cast<std::int64_t>(ids_a.size());
    report.b_total = static_cast<std::int64_t>(ids_b.size());
    for (const auto& id : ids_a) {
        if (set_b.count(id)) ++report.common;
    }
    report.a_only = report.a_total - report.common;
    report.b_only = report.b_total - report.common;

    for (int k : ks) {
        if (k < 1) throw std::invalid_argument("top-k values must be >= 1");
        const std::size_t ka = std::min<std::size_t>(static_cast<std::size_t>(k), ids_a.size());
        const std::size_t kb = std::min<std::size_t>(static_cast<std::size_t>(k), ids_b.size());
        const std::set<Identity> head_b(ids_b.begin(), ids_b.begin() + static_cast<std::ptrdiff_t>(kb));
        std::int64_t anywhere = 0;
        std::int64_t strict = 0;
        for (std::size_t i = 0; i < ka; ++i) {
            if (set_b.count(ids_a[i])) ++anywhere;
            if (head_b.count(ids_a[i])) ++strict;
        }
        report.topk_recall[k] = anywhere;
        report.topk_strict[k] = strict;
    }
    return report;
}

std::string comparison_to_json(const ComparisonReport& report) {
    nlohmann::json j;
    j["a_total"] = report.a_total;
    j["b_total"] = report.b_total;
    j["common"] = report.common;
    j["a_only"] = report.a_only;
    j["b_only"] = report.b_only;
    auto& recall = j["topk_recall"] = nlohmann::json::object();
    for (const auto& [k, v] : report.topk_recall) recall[std::to_string(k)] = v;
    auto& strict = j["topk_strict"] = nlohmann::json::object();
    for (const auto& [k, v] : report.topk_strict) strict[std::to_string(k)] = v;
    return j.dump(2) + "\n";
}

ComparisonReport comparison_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ComparisonReport report;
    report.a_total = j.at("a_total").get<std::int64_t>();
    report.b_total = j.at("b_total").get<std::int64_t>();
    report.common = j.at("common").get<std::int64_t>();
    report.a_only = j.at("a_only").get<std::int64_t>();
    report.b_only = j.at("b_only").get<std::int64_t>();
    for (const auto& [key, value] : j.at("topk_recall").items()) {
        report.topk_recall[std::stoi(key)] = value.get<std::int64_t>();
    }
    if (j.contains("topk_strict")) {
        for (const auto& [key, value] : j.at("topk_strict").items()) {
            report.topk_strict[std::stoi(key)] = value.get<std::int64_t>();
        }
    }
    return report;
}

namespace {

std::string format_mean(const std::vector<std::int64_t>& values) {
    if (values.empty()) return "";
    double sum = 0;
    for (auto v : values) sum += static_cast<double>(v);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", sum / static_cast<double>(values.size()));
    return buf;
}

} // namespace

void emit_tables(const std::vector<BenchEntry>& entries, const std::string& out_dir) {
    if (entries.empty()) {
        throw CompareError(CompareError::Kind::EmptyInput, "no bench entries to tabulate");
    }
    std::filesystem::create_directories(out_dir);

    std::set<int> percents;
    std::set<int> runs;
    std::set<int> ks;
    std::size_t max_workers = 0;
    for (const auto& e : entries) {
        if (!e.sequential) {
            percents.insert(e.percent);
            runs.insert(e.run);
            if (e.comparison) {
                for (const auto& [k, v] : e.comparison->topk_recall) ks.insert(k);
            }
        }
        max_workers = std::max(max_workers, e.timings.discover_ms.size());
    }

    const auto find_entry = [&entries](int percent, int run) -> const BenchEntry* {
        for (const auto& e : entries) {
            if (!e.sequential && e.percent == percent && e.run == run) return &e;
        }
        return nullptr;
    };

    // runtimes.csv: rows = percent plus a sequential row; cells averaged
    // over runs.
    {
        std::ofstream out(std::filesystem::path(out_dir) / "runtimes.csv", std::ios::binary);
        out << "percent,total_ms";
        for (std::size_t w = 0; w < max_workers; ++w) out << ",worker" << (w + 1) << "_ms";
        out << "\n";
        for (int percent : percents) {
            std::vector<std::int64_t> totals;
            std::vector<std::vector<std::int64_t>> worker_times(max_workers);
            for (const auto& e : entries) {
                if (e.sequential || e.percent != percent) continue;
                totals.push_back(e.timings.total_ms);
                for (std::size_t w = 0; w < e.timings.discover_ms.size(); ++w) {
                    worker_times[w].push_back(e.timings.discover_ms[w]);
                }
            }
            out << percent << ',' << format_mean(totals);
            for (std::size_t w = 0; w < max_workers; ++w) out << ',' << format_mean(worker_times[w]);
            out << "\n";
        }
        std::vector<std::int64_t> seq_totals;
        for (const auto& e : entries) {
            if (e.sequential) seq_totals.push_back(e.timings.total_ms);
        }
        if (!seq_totals.empty()) {
            out << "sequential," << format_mean(seq_totals);
            for (std::size_t w = 0; w < max_workers; ++w) out << ',';
            out << "\n";
        }
    }

    // topk.csv: per-run recall columns, loose then strict.
    {
        std::ofstream out(std::filesystem::path(out_dir) / "topk.csv", std::ios::binary);
        out << "percent";
        for (int run : runs) {
            for (int k : ks) out << ",run" << (run + 1) << "_top" << k;
            for (int k : ks) out << ",run" << (run + 1) << "_top" << k << "_strict";
        }
        out << "\n";
        for (int percent : percents) {
            out << percent;
            for (int run : runs) {
                const BenchEntry* e = find_entry(percent, run);
                for (int k : ks) {
                    out << ',';
                    if (e && e->comparison) {
                        const auto it = e->comparison->topk_recall.find(k);
                        if (it != e->comparison->topk_recall.end()) out << it->second;
                    }
                }
                for (int k : ks) {
                    out << ',';
                    if (e && e->comparison) {
                        const auto it = e->comparison->topk_strict.find(k);
                        if (it != e->comparison->topk_strict.end()) out << it->second;
                    }
                }
            }
            out << "\n";
        }
    }

    // quality.csv: per-run (br total, common, sequential-only, br-only),
    // with a = sequential list and b = merged list in each comparison.
    {
        std::ofstream out(std::filesystem::path(out_dir) / "quality.csv", std::ios::binary);
        out << "percent";
        for (int run : runs) {
            out << ",run" << (run + 1) << "_br_total,run" << (run + 1) << "_common,run"
                << (run + 1) << "_seq_only,run" << (run + 1) << "_br_only";
        }
        out << "\n";
        for (int percent : percents) {
            out << percent;
            for (int run : runs) {
                const BenchEntry* e = find_entry(percent, run);
                if (e && e->comparison) {
                    out << ',' << e->comparison->b_total << ',' << e->comparison->common << ','
                        << e->comparison->a_only << ',' << e->comparison->b_only;
                } else {
                    out << ",,,,";
                }
            }
            out << "\n";
        }
    }
}

} // namespace sgm
