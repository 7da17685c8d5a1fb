#include "polarnet/csv.hpp"

#include <istream>
#include <ostream>

#include "polarnet/errors.hpp"

namespace polarnet::csv {

Reader::Reader(std::istream& in) : in_(in) {}

std::optional<Row> Reader::next() {
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return std::nullopt;

    if (first_record_) {
        first_record_ = false;
        // UTF-8 BOM
        if (c == 0xEF && in_.peek() == 0xBB) {
            in_.get();
            if (in_.peek() == 0xBF) {
                in_.get();
                c = in_.get();
                if (c == std::istream::traits_type::eof()) return std::nullopt;
            } else {
                throw InputError("invalid byte sequence at start of file");
            }
        }
    }

    Row row;
    row.record_number = ++record_number_;
    std::string field;
    bool quoted = false;

    for (;;) {
        if (c == std::istream::traits_type::eof()) {
            if (quoted) {
                throw InputError("unterminated quoted field in record " +
                                 std::to_string(row.record_number));
            }
            row.fields.push_back(std::move(field));
            return row;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            if (!field.empty()) {
                throw InputError("stray quote in record " + std::to_string(row.record_number));
            }
            quoted = true;
        } else if (ch == ',') {
            row.fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            row.fields.push_back(std::move(field));
            return row;
        } else if (ch == '\r') {
            if (in_.peek() == '\n') in_.get();
            row.fields.push_back(std::move(field));
            return row;
        } else {
            field.push_back(ch);
        }
        c = in_.get();
    }
}

std::string escape_field(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (const char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.put(',');
        out << escape_field(fields[i]);
    }
    out << "\r\n";
}

}  // namespace polarnet::csv
