#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kyle {

// Canonical numeric cell: 12 significant digits, NaN rendered empty.
std::string csv_number(double x);

// RFC-4180-style quoting: wraps and doubles quotes when the field contains a
// comma, quote, or newline.
std::string csv_escape(const std::string& field);

// Header plus rows of pre-rendered cells, comma-separated, LF line endings.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace kyle
