#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bfem {

inline constexpr const char* kToolVersion = "bfem 1.0.0";

// Provenance written as '#' comment lines ahead of every CSV table.
struct OutputHeader {
    std::string config_hash;   // 16 hex digits
    std::string mesh;          // e.g. "R0=0.2 nseg=96 refine=2 order=2"
    std::string kind;          // table schema name, e.g. "bands/1"
};

void write_header(std::ostream& os, const OutputHeader& h);

// One CSV row, full double precision (17 significant digits).
void write_row(std::ostream& os, const std::vector<double>& values);
void write_columns(std::ostream& os, const std::vector<std::string>& names);

std::string format_double(double v);

// FNV-1a 64-bit, hex encoded.
std::string hash_hex(const std::string& text);

}  // namespace bfem
