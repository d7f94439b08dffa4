// Batch front-end: every subcommand reads a RunConfig (file plus --set
// overrides), writes its tables into the output directory and finishes with
// summary.json.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfem/asymptotics.hpp"
#include "bfem/config.hpp"
#include "bfem/tables.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bfem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Run {
    RunConfig cfg;
    json summary;
    std::vector<std::string> outputs;

    fs::path path(const std::string& name) const { return fs::path(cfg.out_dir) / name; }

    std::ofstream open(const std::string& name)
    {
        std::ofstream os(path(name));
        if (!os) throw ConfigError("output.dir", "cannot write " + path(name).string());
        outputs.push_back(name);
        return os;
    }

    OutputHeader header(const Mesh* mesh, const char* kind) const
    {
        OutputHeader h;
        h.config_hash = config_hash(cfg);
        h.mesh = mesh ? mesh_provenance(*mesh) : "none";
        h.kind = kind;
        return h;
    }

    void check(const std::string& name, bool ok) { summary["checks"][name] = ok; }

    SolverOptions solver() const
    {
        SolverOptions o;
        o.tol = cfg.tol;
        o.seed = cfg.seed;
        return o;
    }

    std::vector<double> g_values() const { return cfg.g_list.empty() ? std::vector<double>{cfg.g} : cfg.g_list; }
};

Mesh make_mesh(const RunConfig& c) { return build_mesh(CellGeometry{c.R0, c.nseg}, c.refine, c.order); }

void cmd_mesh(Run& r)
{
    const Mesh mesh = make_mesh(r.cfg);
    auto os = r.open("mesh.txt");
    write_mesh(mesh, os);
    r.summary["mesh"] = {{"nodes", mesh.num_nodes()},
                         {"elements", mesh.num_elements()},
                         {"torus_nodes", mesh.num_torus_nodes()},
                         {"max_diameter", mesh.max_element_diameter()},
                         {"area_A", mesh.region_area(Region::InclusionA)},
                         {"area_B", mesh.region_area(Region::InclusionB)},
                         {"area_total", mesh.total_area()}};
    r.check("cell_area", std::abs(mesh.total_area() - mesh.basis.cell_area()) < 1e-12);
}

void cmd_oracle(Run& r, int count)
{
    const auto spec = disc_spectrum(r.cfg.R0, count);
    auto os = r.open("oracle.csv");
    write_oracle_csv(os, spec, r.cfg.R0, r.header(nullptr, kSchemaOracle));
    r.summary["z01"] = bessel_zero(0, 1).z;
}

void cmd_bands(Run& r)
{
    const Mesh mesh = make_mesh(r.cfg);
    const BandTable t = sweep_path(mesh, r.cfg.g, kpath_MGKM(r.cfg.samples_per_segment), r.cfg.nbands, r.solver());
    auto os = r.open("bands.csv");
    write_band_csv(os, t, r.header(&mesh, kSchemaBands));
    json gaps = json::array();
    for (int n = 1; n < r.cfg.nbands; ++n) {
        const GapReport gr = gap_report(t, n);
        if (gr.gap_exists) gaps.push_back({{"above_band", n}, {"sup", gr.sup_band}, {"inf_next", gr.inf_next}});
    }
    r.summary["gaps"] = gaps;
    const double d1 = disc_eigenvalue(r.cfg.R0, 1).value;
    r.summary["delta1_oracle"] = d1;
}

void cmd_bracketing(Run& r)
{
    const Mesh mesh = make_mesh(r.cfg);
    const LatticeBasis& b = mesh.basis;
    std::mt19937_64 rng(r.cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec2> ks;
    for (int i = 0; i < r.cfg.k_samples; ++i) ks.push_back(u(rng) * b.k1 + u(rng) * b.k2);
    std::vector<std::pair<double, BracketResult>> rows;
    bool all = true;
    for (double g : r.g_values()) {
        const CellSpectra cells = cell_spectra(mesh, g, r.cfg.nbands, r.solver());
        for (const Vec2& k : ks) {
            const BandsAtK bk = bands_at_k(mesh, g, k, r.cfg.nbands, false, r.solver());
            for (int n = 1; n <= r.cfg.nbands; ++n) {
                rows.emplace_back(g, bracket(cells, n, k, bk.lambda[n - 1]));
                all = all && rows.back().second.holds;
            }
        }
    }
    auto os = r.open("bracketing.csv");
    write_bracketing_csv(os, rows, r.header(&mesh, kSchemaBracketing));
    r.check("bracketing", all);
}

void cmd_dirac(Run& r, bool scan, bool cone, double g_lo, double g_hi)
{
    const Mesh mesh = make_mesh(r.cfg);
    if (!scan) {
        const DiracReport rep = dirac_report(mesh, r.cfg.g, r.cfg.nbands, cone, r.solver());
        auto os = r.open("dirac.json");
        os << to_json(rep) << '\n';
        r.summary["dirac"] = json::parse(to_json(rep));
        r.check("degenerate", rep.degeneracy_gap < r.cfg.degeneracy_tol);
        r.check("nondegenerate_velocity", rep.passed_nondegeneracy);
        return;
    }
    std::vector<BranchData> rows;
    for (double g : r.g_values()) rows.push_back(branches_at_K(mesh, g, r.solver()));
    auto os = r.open("transition.csv");
    write_transition_csv(os, rows, r.header(&mesh, kSchemaTransition));
    const TransitionResult tr = transition_scan(mesh, g_lo, g_hi, 1e-6, r.solver());
    r.summary["transition"] = {{"bracketed", tr.bracketed}, {"g_c", tr.g_c}, {"spread_rel", tr.spread_rel},
                               {"evaluations", tr.history.size()}};
    r.check("transition_bracketed", tr.bracketed);
    bool labels = true;
    for (const auto& b : rows) labels = labels && b.one_label == SectorLabel::One;
    r.check("simple_branch_one", labels);
}

void cmd_scan_g(Run& r, bool cone)
{
    const Mesh mesh = make_mesh(r.cfg);
    const VdScaling s = vd_scaling_study(mesh, r.g_values(), cone, r.solver());
    auto os = r.open("velocity.csv");
    write_velocity_csv(os, s.rows, r.header(&mesh, kSchemaVelocity));
    r.summary["velocity"] = {{"slope", s.slope}, {"spread_rel", s.spread_rel}, {"plateau", s.plateau}};
}

void cmd_asymptotics(Run& r)
{
    if (r.cfg.g_list.size() < 2) throw ConfigError("physics.g_list", "asymptotics needs at least two contrasts");
    const Mesh mesh = make_mesh(r.cfg);
    const HighContrastStudy s = high_contrast_study(mesh, r.cfg.g_list, r.solver());
    auto os = r.open("asymptotics.csv");
    write_asymptotics_csv(os, s, r.header(&mesh, kSchemaAsymptotics));
    r.summary["asymptotics"] = {{"delta", s.delta},
                                {"lambda1", s.lambda1},
                                {"lambda1_trace", s.lambda1_trace},
                                {"fitted_lambda1", s.fitted_lambda1},
                                {"slope_residual_M0", s.slope_residual_M0},
                                {"slope_residual_M1", s.slope_residual_M1},
                                {"slope_eta_M0", s.slope_eta_M0},
                                {"slope_eta_M1", s.slope_eta_M1},
                                {"slope_l2", s.slope_l2},
                                {"slope_h1", s.slope_h1}};
    r.check("lambda1_negative", s.lambda1 < 0);
    r.check("residual_M1_slope", s.slope_residual_M1 >= -2.2 && s.slope_residual_M1 <= -1.8);
    r.check("eigenfunction_l2_slope", s.slope_l2 >= -1.15 && s.slope_l2 <= -0.85);
    r.check("eigenfunction_h1_slope", s.slope_h1 >= -1.15 && s.slope_h1 <= -0.85);
}

void cmd_te(Run& r, const std::optional<double>& lambda, const std::string& input)
{
    if (lambda) {
        const double w = te_frequency(*lambda, r.cfg.g, r.cfg.c);
        r.summary["omega"] = w;
        std::cout << format_double(w) << '\n';
    }
    if (!input.empty()) {
        std::ifstream is(input);
        if (!is) throw ConfigError("--input", "cannot read " + input);
        const BandTable t = read_band_csv(is);
        auto os = r.open("te.csv");
        write_te_csv(os, t, r.cfg.c, r.header(nullptr, kSchemaTe));
    }
    if (!lambda && input.empty()) throw ConfigError("te", "need --lambda or --input");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Floquet-Bloch finite elements for honeycomb high-contrast media"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_file, out_dir;
    std::vector<std::string> sets;
    app.add_option("-c,--config", config_file, "configuration file")->check(CLI::ExistingFile);
    app.add_option("-s,--set", sets, "override, section.key=value");
    app.add_option("-o,--out", out_dir, "output directory (overrides output.dir)");

    auto* mesh_cmd = app.add_subcommand("mesh", "build the periodic mesh and write it");
    int oracle_count = 20;
    auto* oracle_cmd = app.add_subcommand("oracle", "disc Dirichlet spectrum from Bessel zeros");
    oracle_cmd->add_option("--count", oracle_count, "eigenvalues with multiplicity")->check(CLI::PositiveNumber);
    auto* bands_cmd = app.add_subcommand("bands", "band diagram along M-Gamma-K-M");
    auto* br_cmd = app.add_subcommand("bracketing", "Neumann/Dirichlet bracketing at random k");
    bool scan = false, cone = false;
    double g_lo = 5.0, g_hi = 30.0;
    auto* dirac_cmd = app.add_subcommand("dirac", "Dirac point report at K, or the g-transition scan");
    dirac_cmd->add_flag("--scan", scan, "scan g_list and bisect the triple degeneracy");
    dirac_cmd->add_flag("--cone", cone, "also fit the cone slopes");
    dirac_cmd->add_option("--g-lo", g_lo, "lower end of the bisection bracket");
    dirac_cmd->add_option("--g-hi", g_hi, "upper end of the bisection bracket");
    bool scan_cone = false;
    auto* scang_cmd = app.add_subcommand("scan-g", "Dirac velocity over g_list");
    scang_cmd->add_flag("--cone", scan_cone, "also fit the cone slopes");
    auto* asym_cmd = app.add_subcommand("asymptotics", "high-contrast expansion study over g_list");
    std::optional<double> te_lambda;
    std::string te_input;
    auto* te_cmd = app.add_subcommand("te", "TE frequency omega = c sqrt(lambda / g)");
    te_cmd->add_option("--lambda", te_lambda, "single eigenvalue");
    te_cmd->add_option("--input", te_input, "bands CSV to convert");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    Run r;
    try {
        if (!config_file.empty()) {
            std::ifstream is(config_file);
            std::stringstream ss;
            ss << is.rdbuf();
            r.cfg = parse_config(ss.str());
        }
        for (const auto& s : sets) set_config_value(r.cfg, s);
        if (!out_dir.empty()) r.cfg.out_dir = out_dir;
        r.cfg.study = app.get_subcommands().front()->get_name();
        validate_config(r.cfg);
        fs::create_directories(r.cfg.out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "config error: output.dir: " << e.what() << '\n';
        return kExitConfig;
    }

    r.summary["tool"] = kToolVersion;
    r.summary["command"] = r.cfg.study;
    r.summary["config_hash"] = config_hash(r.cfg);
    r.summary["config"] = serialize_config(r.cfg);
    r.summary["checks"] = json::object();
    int code = 0;
    try {
        if (*mesh_cmd) cmd_mesh(r);
        else if (*oracle_cmd) cmd_oracle(r, oracle_count);
        else if (*bands_cmd) cmd_bands(r);
        else if (*br_cmd) cmd_bracketing(r);
        else if (*dirac_cmd) cmd_dirac(r, scan, cone, g_lo, g_hi);
        else if (*scang_cmd) cmd_scan_g(r, scan_cone);
        else if (*asym_cmd) cmd_asymptotics(r);
        else if (*te_cmd) cmd_te(r, te_lambda, te_input);
        r.summary["status"] = "ok";
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        r.summary["status"] = "numerical_failure";
        r.summary["error"] = e.what();
        code = kExitNumerical;
    }
    r.summary["outputs"] = r.outputs;
    std::ofstream(r.path("summary.json")) << r.summary.dump(2) << '\n';
    return code;
}
