#pragma once

#include <string>
#include <vector>

namespace mcomm {

inline constexpr const char* kVersion = "0.1.0";

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal form; identical inputs give identical text.
std::string format_number(double v);

/// Renders "# mcomm <version> config=<hash>", the header row, then the rows.
std::string render_csv(const CsvTable& table, const std::string& config_hash);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mcomm
