#include "bfem/io.hpp"

#include <cstdio>
#include <ostream>

namespace bfem {

void write_header(std::ostream& os, const OutputHeader& h)
{
    os << "# tool: " << kToolVersion << '\n';
    os << "# schema: " << h.kind << '\n';
    os << "# config_hash: " << h.config_hash << '\n';
    os << "# mesh: " << h.mesh << '\n';
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostream& os, const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_double(values[i]);
    os << '\n';
}

void write_columns(std::ostream& os, const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
    os << '\n';
}

std::string hash_hex(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bfem
