#ifndef SGM_FASTA_HPP
#define SGM_FASTA_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgm {

// One FASTA entry. residues is upper-case over {A,C,G,T,N}; line_width is
// the body width of the source file (writers re-wrap at this width so the
// file layout survives a parse/transform/write cycle).
struct SequenceRecord {
    std::string header;
    std::string residues;
    std::size_t line_width = 0;

    bool operator==(const SequenceRecord&) const = default;
};

class FastaError : public std::runtime_error {
public:
    enum class Kind { EmptyInput, MalformedHeader, IllegalCharacter, EmptyBody, InvalidRecord };

    FastaError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Throws FastaError::InvalidRecord if the record violates its invariants.
void validate_record(const SequenceRecord& record);

std::vector<SequenceRecord> parse_fasta(std::istream& in);
std::vector<SequenceRecord> parse_fasta_string(const std::string& text);
std::vector<SequenceRecord> parse_fasta_file(const std::string& path);

void write_fasta(const std::vector<SequenceRecord>& records, std::ostream& out);
std::string write_fasta_string(const std::vector<SequenceRecord>& records);
void write_fasta_file(const std::vector<SequenceRecord>& records, const std::string& path);

} // namespace sgm

#endif
