#include "boardcore/csv.hpp"

#include <sstream>

#include "boardcore/util.hpp"

namespace boardcore {

size_t CsvTable::col(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ParseError(path + ": missing required column '" + name + "'");
}

CsvTable parse_csv_text(const std::string& text, const std::string& path_for_errors) {
    CsvTable t;
    t.path = path_for_errors;

    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    bool row_started = false;
    size_t lineno = 1;
    size_t row_line = 1;

    auto end_field = [&] {
        fields.push_back(cur);
        cur.clear();
    };
    auto end_row = [&] {
        end_field();
        if (t.header.empty()) {
            t.header = fields;
        } else {
            t.rows.push_back(fields);
            t.line.push_back(row_line);
        }
        fields.clear();
        row_started = false;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (!row_started) {
            row_started = true;
            row_line = lineno;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++lineno;
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // swallow; handled with the following '\n'
        } else if (c == '\n') {
            ++lineno;
            end_row();
        } else {
            cur.push_back(c);
        }
    }
    if (in_quotes) throw ParseError(path_for_errors + ": unterminated quoted field");
    if (row_started || !cur.empty() || !fields.empty()) end_row();

    if (t.header.empty()) throw ParseError(path_for_errors + ": missing header row");
    for (size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r].size() != t.header.size()) {
            throw ParseError(path_for_errors + ":" + std::to_string(t.line[r]) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(t.rows[r].size()));
        }
    }
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv_text(ss.str(), path);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw ParseError(path + ": cannot open file for writing");
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        const std::string& f = fields[i];
        bool quote = f.find_first_of(",\"\n\r") != std::string::npos;
        if (quote) {
            out_ << '"';
            for (char c : f) {
                if (c == '"') out_ << "\"\"";
                else out_ << c;
            }
            out_ << '"';
        } else {
            out_ << f;
        }
    }
    out_ << '\n';
}

void CsvWriter::close() {
    if (out_.is_open()) {
        out_.flush();
        if (!out_) throw ParseError(path_ + ": write failed");
        out_.close();
    }
}

}  // namespace boardcore
