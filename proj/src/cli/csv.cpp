#include "dce/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace dce::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return quote(v); }
    };
    return std::visit(Visitor{}, c);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
    out_ << '\n';
}

}  // namespace dce::cli
