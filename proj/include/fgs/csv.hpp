#pragma once

#include <string>
#include <vector>

namespace fgs {

/// Minimal CSV table: one header row plus numeric-or-text cells. Every file
/// the tool writes is readable through this.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

} // namespace fgs
