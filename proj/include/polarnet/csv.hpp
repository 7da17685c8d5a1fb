#pragma once

#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polarnet::csv {

struct Row {
    std::vector<std::string> fields;
    std::size_t record_number = 0;  // 1-based, header included
};

/// RFC 4180 record reader. Quoted fields may contain commas, quotes ("" escape)
/// and line breaks. Accepts both CRLF and LF record separators and strips a
/// leading UTF-8 BOM.
class Reader {
public:
    explicit Reader(std::istream& in);

    /// Next record, or nullopt at end of input. Throws InputError on a stray
    /// or unterminated quote.
    std::optional<Row> next();

private:
    std::istream& in_;
    std::size_t record_number_ = 0;
    bool first_record_ = true;
};

/// Field encoder: quotes when the field contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

/// Writes one record, CRLF-terminated.
void write_row(std::ostream& out, std::span<const std::string> fields);

inline void write_row(std::ostream& out, std::initializer_list<std::string> fields) {
    write_row(out, std::span<const std::string>(fields.begin(), fields.size()));
}

}  // namespace polarnet::csv
