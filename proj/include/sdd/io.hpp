#pragma once

#include <string>
#include <vector>

namespace sdd {

/// Doubles printed with 17 significant digits (round-trip exact), used for
/// every CSV and report value so identical runs produce identical bytes.
std::string format_double(double x);

std::vector<std::string> split_csv_line(const std::string& line, char sep = ',');

}  // namespace sdd
