#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bfem {

// Run configuration. Text form, one "key = value" per line under "[section]"
// headers; '#' starts a comment; lists are comma separated:
//
//   [geometry]   R0, nseg
//   [mesh]       refine, order
//   [physics]    g, g_list, c
//   [spectral]   nbands, samples_per_segment, tol, degeneracy_tol, k_samples, seed
//   [study]      kind
//   [output]     dir
struct RunConfig {
    double R0 = 0.2;
    int nseg = 96;
    int refine = 2;
    int order = 2;
    double g = 100.0;
    std::vector<double> g_list;
    double c = 1.0;
    int nbands = 6;
    int samples_per_segment = 8;
    double tol = 1e-9;
    double degeneracy_tol = 1e-6;
    int k_samples = 10;
    unsigned long long seed = 20240611ULL;
    std::string study = "bands";
    std::string out_dir = ".";

    bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

const std::vector<std::string>& study_kinds();

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);
// Applies "section.key=value".
void set_config_value(RunConfig& cfg, const std::string& assignment);
// Throws ConfigError naming the first offending field.
void validate_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// TE frequency from a band eigenvalue: omega = c sqrt(lambda / g).
double te_frequency(double lambda, double g, double c = 1.0);

}  // namespace bfem
