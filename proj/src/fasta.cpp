#include "sgm/fasta.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sgm {

namespace {

bool is_residue(char c) {
    switch (c) {
    case 'A': case 'C': case 'G': case 'T': case 'N':
    case 'a': case 'c': case 'g': case 't': case 'n':
        return true;
    default:
        return false;
    }
}

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

void validate_record(const SequenceRecord& record) {
    if (record.residues.empty()) {
        throw FastaError(FastaError::Kind::InvalidRecord,
                         "record '" + record.header + "' has no residues");
    }
    if (record.line_width < 1) {
        throw FastaError(FastaError::Kind::InvalidRecord,
                         "record '" + record.header + "' has line_width 0");
    }
    if (record.header.find('\n') != std::string::npos ||
        record.header.find('\r') != std::string::npos) {
        throw FastaError(FastaError::Kind::InvalidRecord, "record header contains a line break");
    }
    for (char c : record.residues) {
        if (c != 'A' && c != 'C' && c != 'G' && c != 'T' && c != 'N') {
            throw FastaError(FastaError::Kind::InvalidRecord,
                             std::string("record '") + record.header +
                                 "' contains non-normalized residue '" + c + "'");
        }
    }
}

std::vector<SequenceRecord> parse_fasta(std::istream& in) {
    std::vector<SequenceRecord> records;
    SequenceRecord current;
    bool in_record = false;
    std::string line;
    std::size_t line_no = 0;

    auto finish = [&]() {
        if (!in_record) return;
        if (current.residues.empty()) {
            throw FastaError(FastaError::Kind::EmptyBody,
                             "record '" + current.header + "' has an empty body");
        }
        records.push_back(std::move(current));
        current = SequenceRecord{};
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;

        if (line[0] == '>') {
            finish();
            in_record = true;
            current.header = line.substr(1);
            current.residues.clear();
            current.line_width = 0;
            continue;
        }
        if (!in_record) {
            throw FastaError(FastaError::Kind::MalformedHeader,
                             "line " + std::to_string(line_no) + ": body text before first '>'");
        }
        for (char c : line) {
            if (!is_residue(c)) {
                throw FastaError(FastaError::Kind::IllegalCharacter,
                                 "line " + std::to_string(line_no) + ": illegal character '" +
                                     std::string(1, c) + "'");
            }
            current.residues.push_back(
                static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
        if (current.line_width == 0) current.line_width = line.size();
    }
    finish();

    if (records.empty()) {
        throw FastaError(FastaError::Kind::EmptyInput, "input contains no FASTA records");
    }
    return records;
}

std::vector<SequenceRecord> parse_fasta_string(const std::string& text) {
    std::istringstream in(text);
    return parse_fasta(in);
}

std::vector<SequenceRecord> parse_fasta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FastaError(FastaError::Kind::EmptyInput, "cannot open '" + path + "'");
    return parse_fasta(in);
}

void write_fasta(const std::vector<SequenceRecord>& records, std::ostream& out) {
    for (const auto& record : records) {
        validate_record(record);
        out << '>' << record.header << '\n';
        const std::string& seq = record.residues;
        for (std::size_t pos = 0; pos < seq.size(); pos += record.line_width) {
            out.write(seq.data() + pos,
                      static_cast<std::streamsize>(std::min(record.line_width, seq.size() - pos)));
            out.put('\n');
        }
    }
}

std::string write_fasta_string(const std::vector<SequenceRecord>& records) {
    std::ostringstream out;
    write_fasta(records, out);
    return out.str();
}

void write_fasta_file(const std::vector<SequenceRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FastaError(FastaError::Kind::InvalidRecord, "cannot open '" + path + "' for writing");
    write_fasta(records, out);
    if (!out) throw FastaError(FastaError::Kind::InvalidRecord, "short write to '" + path + "'");
}

} // namespace sgm
