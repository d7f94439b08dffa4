#include "bfem/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "bfem/io.hpp"
#include "bfem/mesh.hpp"

namespace bfem {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& field, const std::string& v)
{
    double x = 0;
    const auto t = trim(v);
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw ConfigError(field, "not a number: '" + v + "'");
    return x;
}

long long to_int(const std::string& field, const std::string& v)
{
    long long x = 0;
    const auto t = trim(v);
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError(field, "not an integer: '" + v + "'");
    return x;
}

std::vector<double> to_list(const std::string& field, const std::string& v)
{
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(field, item));
    return out;
}

void assign(RunConfig& c, const std::string& key, const std::string& v)
{
    if (key == "geometry.R0") c.R0 = to_double(key, v);
    else if (key == "geometry.nseg") c.nseg = static_cast<int>(to_int(key, v));
    else if (key == "mesh.refine") c.refine = static_cast<int>(to_int(key, v));
    else if (key == "mesh.order") c.order = static_cast<int>(to_int(key, v));
    else if (key == "physics.g") c.g = to_double(key, v);
    else if (key == "physics.g_list") c.g_list = to_list(key, v);
    else if (key == "physics.c") c.c = to_double(key, v);
    else if (key == "spectral.nbands") c.nbands = static_cast<int>(to_int(key, v));
    else if (key == "spectral.samples_per_segment") c.samples_per_segment = static_cast<int>(to_int(key, v));
    else if (key == "spectral.tol") c.tol = to_double(key, v);
    else if (key == "spectral.degeneracy_tol") c.degeneracy_tol = to_double(key, v);
    else if (key == "spectral.k_samples") c.k_samples = static_cast<int>(to_int(key, v));
    else if (key == "spectral.seed") {
        const long long s = to_int(key, v);
        if (s < 0) throw ConfigError(key, "must be non-negative");
        c.seed = static_cast<unsigned long long>(s);
    }
    else if (key == "study.kind") c.study = trim(v);
    else if (key == "output.dir") c.out_dir = trim(v);
    else throw ConfigError(key, "unknown key");
}

}  // namespace

const std::vector<std::string>& study_kinds()
{
    static const std::vector<std::string> k{"mesh", "oracle", "bands", "bracketing", "dirac", "scan-g", "asymptotics", "te"};
    return k;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        if (section.empty()) throw ConfigError("line " + std::to_string(lineno), "key outside any section");
        assign(c, section + "." + trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

std::string serialize_config(const RunConfig& c)
{
    std::ostringstream os;
    os << "[geometry]\nR0 = " << format_double(c.R0) << "\nnseg = " << c.nseg << "\n\n";
    os << "[mesh]\nrefine = " << c.refine << "\norder = " << c.order << "\n\n";
    os << "[physics]\ng = " << format_double(c.g) << "\ng_list = ";
    for (std::size_t i = 0; i < c.g_list.size(); ++i) os << (i ? ", " : "") << format_double(c.g_list[i]);
    os << "\nc = " << format_double(c.c) << "\n\n";
    os << "[spectral]\nnbands = " << c.nbands << "\nsamples_per_segment = " << c.samples_per_segment
       << "\ntol = " << format_double(c.tol) << "\ndegeneracy_tol = " << format_double(c.degeneracy_tol)
       << "\nk_samples = " << c.k_samples << "\nseed = " << c.seed << "\n\n";
    os << "[study]\nkind = " << c.study << "\n\n";
    os << "[output]\ndir = " << c.out_dir << "\n";
    return os.str();
}

void set_config_value(RunConfig& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, "expected section.key=value");
    assign(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void validate_config(const RunConfig& c)
{
    if (!(c.R0 > 0)) throw ConfigError("geometry.R0", "must be positive");
    try {
        CellGeometry{c.R0, c.nseg}.validate(c.refine);
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(": ");
        throw ConfigError(colon == std::string::npos ? "geometry" : msg.substr(0, colon),
                          colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
    if (c.refine < 0 || c.refine > 6) throw ConfigError("mesh.refine", "must lie in [0, 6]");
    if (c.order != 1 && c.order != 2) throw ConfigError("mesh.order", "must be 1 or 2");
    if (!(c.g > 0) || !std::isfinite(c.g)) throw ConfigError("physics.g", "must be positive and finite");
    for (double g : c.g_list)
        if (!(g > 0) || !std::isfinite(g)) throw ConfigError("physics.g_list", "entries must be positive and finite");
    if (!(c.c > 0)) throw ConfigError("physics.c", "must be positive");
    if (c.nbands < 1) throw ConfigError("spectral.nbands", "must be >= 1");
    if (c.samples_per_segment < 1) throw ConfigError("spectral.samples_per_segment", "must be >= 1");
    if (!(c.tol > 0 && c.tol < 1e-2)) throw ConfigError("spectral.tol", "must lie in (0, 1e-2)");
    if (!(c.degeneracy_tol > 0 && c.degeneracy_tol < 1)) throw ConfigError("spectral.degeneracy_tol", "must lie in (0, 1)");
    if (c.k_samples < 1) throw ConfigError("spectral.k_samples", "must be >= 1");
    const auto& kinds = study_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.study) == kinds.end()) throw ConfigError("study.kind", "unknown study '" + c.study + "'");
    if (c.out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

std::string config_hash(const RunConfig& cfg) { return hash_hex(serialize_config(cfg)); }

double te_frequency(double lambda, double g, double c)
{
    if (!(lambda >= 0)) throw std::invalid_argument("te_frequency: lambda must be non-negative");
    if (!(g > 0)) throw std::invalid_argument("te_frequency: g must be positive");
    if (!(c > 0)) throw std::invalid_argument("te_frequency: c must be positive");
    return c * std::sqrt(lambda / g);
}

}  // namespace bfem
