#ifndef QMIRROR_IO_UTIL_HPP
#define QMIRROR_IO_UTIL_HPP

#include <string>
#include <vector>
#include "qmirror/common.hpp"

namespace qmirror {

inline constexpr const char* tool_version = "qmirror 0.1.0";

// 17 significant digits: parses back bit-identically.
std::string fmt17(double v);

// Comma-separated, header row, one fmt17 cell per value. Extra header lines
// (e.g. "# causality_defect = ...") go in front verbatim.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& preamble = {});

std::string config_hash(const std::string& canonical_text); // FNV-1a 64, hex

} // namespace qmirror

#endif
