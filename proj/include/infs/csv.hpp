#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "infs/errors.hpp"

namespace infs::csv {

// RFC-4180-style reader: header row mandatory (enforced by callers),
// quoted fields may contain commas, doubled quotes and line breaks.
// Accepts both LF and CRLF line endings.
inline std::vector<std::vector<std::string>> read_records(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_char = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any_char = false;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                any_char = true;
                break;
            case ',':
                end_field();
                any_char = true;
                break;
            case '\r':
                break;
            case '\n':
                if (any_char || !field.empty() || !record.empty()) end_record();
                break;
            default:
                field.push_back(c);
                any_char = true;
                break;
        }
    }
    if (in_quotes) throw ValidationError("csv: unterminated quoted field");
    if (any_char || !field.empty() || !record.empty()) end_record();
    return records;
}

inline std::vector<std::vector<std::string>> read_records_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("csv: cannot open file: " + path);
    return read_records(in);
}

inline std::string quote_field(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

inline void write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote_field(fields[i]);
    }
    out << '\n';
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

// Parses a numeric cell. Returns NaN for unparseable or non-finite values;
// the caller decides whether NaN means "missing".
inline double parse_cell(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return value;
}

}  // namespace infs::csv
