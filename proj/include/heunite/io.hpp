#pragma once

#include "heunite/errors.hpp"

#include <string>
#include <variant>
#include <vector>

namespace heunite::io {

using Cell = std::variant<double, bool, std::string>;

// column-named rows; every row is exactly columns.size() wide
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };

// header row plus one line per row; numbers at 12 significant digits;
// fields containing separators or quotes are double-quote escaped.
// Emitted text is a fixed point of parse_csv followed by to_csv.
std::string to_csv(const Table& t);

// array of row objects keyed by column name; numbers at 17 significant
// digits, which re-parse to the identical double; non-finite numbers
// emit as null
std::string to_json(const Table& t);

std::string render(const Table& t, Format f);

// inverse of to_csv up to cell typing: true/false become bool, fields that
// fully parse as numbers become double, everything else stays text
Table parse_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace heunite::io
