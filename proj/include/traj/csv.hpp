#pragma once

#include <string>
#include <vector>

namespace traj::csv {

// RFC-4180 style field splitting: quoted fields may contain commas, doubled
// quotes, and (when pre-joined by the caller) newlines.
std::vector<std::string> split_line(const std::string& line);

// Quotes a field only when needed.
std::string escape(const std::string& field);

std::string join(const std::vector<std::string>& fields);

// Shortest round-trip decimal form; integers print without a trailing ".0".
std::string format_double(double v);

std::string format_int(long long v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

// Reads an entire CSV file with a mandatory header row. Skips blank lines.
// Throws ParseError naming the file and line on malformed content.
Table read_file(const std::string& path);

void write_file(const std::string& path, const Table& table);

}  // namespace traj::csv
