#pragma once

// Deterministic CSV: comma separator, '.' decimal, header row, LF endings.
// Numbers use the shortest representation that round-trips.

#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dce::cli {

std::string format_number(double v);

using Cell = std::variant<double, long long, bool, std::string>;

std::string format_cell(const Cell& c);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    void row(const std::vector<Cell>& cells);
    std::size_t columns() const { return columns_; }

private:
    std::ostream& out_;
    std::size_t columns_;
};

}  // namespace dce::cli
