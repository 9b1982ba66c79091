#ifndef CASCADELAB_CSV_HPP
#define CASCADELAB_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cascadelab::csv {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

/// RFC-4180 quoting: the field is quoted only if it contains a comma, a
/// double quote, CR or LF.
std::string quote(std::string_view field);

/// Writes fields joined by commas and a trailing '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the record starts
};

/**
 * Streaming RFC-4180 reader. Quoted fields may contain commas, doubled
 * quotes and line breaks; CRLF and LF line endings are both accepted.
 * Lines beginning with '#' before the first record (metadata preamble)
 * are skipped when skip_comments is set.
 */
class Reader {
public:
    explicit Reader(std::istream& in, bool skip_comments = true) : in_(in), skip_comments_(skip_comments) {}

    /// Next record, or nullopt at end of input. Throws ParseError on an
    /// unterminated quote or stray characters after a closing quote.
    std::optional<Record> next();

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    bool skip_comments_;
    std::size_t line_ = 0;
    bool started_ = false;
};

}  // namespace cascadelab::csv

#endif  // CASCADELAB_CSV_HPP
