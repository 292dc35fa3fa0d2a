#include "heunite/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace heunite::io {

namespace {

std::string fmt_double(double v, int digits) {
    if (!std::isfinite(v)) {
        if (std::isnan(v))
            return "nan";
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

std::string csv_cell(const Cell& c) {
    if (std::holds_alternative<double>(c))
        return fmt_double(std::get<double>(c), 12);
    if (std::holds_alternative<bool>(c))
        return std::get<bool>(c) ? "true" : "false";
    return csv_field(std::get<std::string>(c));
}

std::string json_cell(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        double v = std::get<double>(c);
        if (!std::isfinite(v))
            return "null";
        std::string s = fmt_double(v, 17);
        // keep integral values (and -0) in the double lane of json parsers
        if (s.find_first_of(".e") == std::string::npos)
            s += ".0";
        return s;
    }
    if (std::holds_alternative<bool>(c))
        return std::get<bool>(c) ? "true" : "false";
    return "\"" + json_escape(std::get<std::string>(c)) + "\"";
}

Cell typed_cell(const std::string& field) {
    if (field == "true")
        return Cell{true};
    if (field == "false")
        return Cell{false};
    if (!field.empty()) {
        char* end = nullptr;
        double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str() + field.size())
            return Cell{v};
    }
    return Cell{field};
}

} // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw domain_error("table row width does not match the header");
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& t) {
    std::string out;
    for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i)
            out += ',';
        out += csv_field(t.columns[i]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += csv_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& t) {
    std::string out = "[";
    for (size_t r = 0; r < t.rows.size(); ++r) {
        out += r ? ",\n  {" : "\n  {";
        for (size_t i = 0; i < t.columns.size(); ++i) {
            if (i)
                out += ", ";
            out += "\"" + json_escape(t.columns[i]) + "\": ";
            out += json_cell(t.rows[r][i]);
        }
        out += '}';
    }
    out += "\n]\n";
    return out;
}

std::string render(const Table& t, Format f) {
    return f == Format::csv ? to_csv(t) : to_json(t);
}

Table parse_csv(const std::string& text) {
    if (text.empty())
        throw domain_error("csv: empty input");
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_open = false;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty() && field_open == false) {
            quoted = true;
            field_open = true;
        } else if (c == ',') {
            record.push_back(field);
            field.clear();
            field_open = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            record.push_back(field);
            field.clear();
            field_open = false;
            records.push_back(record);
            record.clear();
        } else {
            field += c;
            field_open = true;
        }
    }
    if (quoted)
        throw domain_error("csv: unterminated quoted field");
    if (field_open || !record.empty()) {
        record.push_back(field);
        records.push_back(record);
    }
    if (records.empty())
        throw domain_error("csv: no header row");

    Table t;
    t.columns = records[0];
    for (size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.columns.size())
            throw domain_error("csv: row width does not match the header");
        std::vector<Cell> row;
        row.reserve(records[r].size());
        for (const std::string& f : records[r])
            row.push_back(typed_cell(f));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw domain_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw domain_error("cannot write file: " + path);
    out << content;
    if (!out.flush())
        throw domain_error("cannot write file: " + path);
}

} // namespace heunite::io
