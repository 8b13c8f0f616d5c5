// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <istream>
#include <string>
#include <vector>

namespace mistweet {

// RFC-4180 style CSV: quoted fields may contain commas, escaped quotes and
// newlines. Tracks the starting line of each record for error messages.
struct CsvReader {
    std::istream& in;
    std::size_t line_no = 1;

    // Returns false at EOF. start_line receives the record's first line.
    bool next(std::vector<std::string>& fields, std::size_t& start_line) {
        fields.clear();
        int ch = in.get();
        if (ch == EOF) return false;
        start_line = line_no;
        std::string field;
        bool quoted = false;
        for (;; ch = in.get()) {
            if (ch == EOF) {
                fields.push_back(std::move(field));
                return true;
            }
            char cc = static_cast<char>(ch);
            if (cc == '\n') ++line_no;
            if (quoted) {
                if (cc == '"') {
                    if (in.peek() == '"') {
                        field.push_back('"');
                        in.get();
                    } else {
                        quoted = false;
                    }
                } else {
                    field.push_back(cc);
                }
                continue;
            }
            if (cc == '"' && field.empty()) {
                quoted = true;
            } else if (cc == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (cc == '\n') {
                if (!field.empty() && field.back() == '\r') field.pop_back();
                fields.push_back(std::move(field));
                return true;
            } else {
                field.push_back(cc);
            }
        }
    }
};

// Quotes a field only when RFC 4180 requires it.
inline std::string csv_quote(const std::string& s) {
    bool needs = false;
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs = true;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace mistweet
