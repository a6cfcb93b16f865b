#include "sdd/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace sdd {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) cells.push_back(cell);
    return cells;
}

}  // namespace sdd
