#pragma once

// Minimal RFC-4180 style CSV reading/writing. Fields containing commas,
// quotes or newlines are quoted; embedded quotes are doubled.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mainpath/common.hpp"

namespace mainpath::csv {

inline std::string escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << escape(fields[i]);
    }
    os << '\n';
}

// Splits one physical line into fields. Lines are assumed not to contain
// embedded newlines (none of the toolkit's formats produce them).
inline std::vector<std::string> parse_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // tolerate CRLF input
        } else {
            cur += c;
        }
    }
    if (in_quotes) throw InputError("unterminated quote in CSV line: " + std::string(line));
    fields.push_back(cur);
    return fields;
}

}  // namespace mainpath::csv
