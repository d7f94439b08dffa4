#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfem/bands.hpp"
#include "bfem/symmetry.hpp"

namespace bfem {

struct Degeneracy {
    int n = 0;               // 1-based index of the lower member of the pair
    double lambda_D = 0.0;   // mean of the pair
    double gap_rel = 0.0;    // |lambda_{n+1} - lambda_n| / lambda_n
    bool triple = false;     // three (or more) eigenvalues coalesce
};

// Smallest n with |l_{n+1} - l_n| < tol l_n and neighbours separated by > 10 tol l_n.
// A coalescing triple is returned with triple = true.
std::optional<Degeneracy> detect_degeneracy(const std::vector<double>& lambda, double tol_rel = 1e-6);
std::optional<Degeneracy> detect_degeneracy(const Mesh& mesh, double g, const Vec2& K, int nbands,
                                            double tol_rel = 1e-6, const SolverOptions& opt = {});

struct DiracBasis {
    int n = 0;
    double lambda_D = 0.0;
    CVec phi1, phi2;             // Bloch DOF vectors at K (pseudoperiodic form)
    Classification c1, c2;
    double overlap = 0.0;        // |<phi1, phi2>_M|
    std::vector<Classification> cluster_labels;
};

// Phi1 = tau-projection of the degenerate pair (M-normalized), Phi2 = PC Phi1.
DiracBasis dirac_basis(const Mesh& mesh, const BandsAtK& bands, int n, const Vec2& K);

struct VelocityIntegrals {
    CVec2 I;              // int sigma Phi2 conj(grad Phi1)
    CVec2 W;              // int sigma Phi1 conj(grad Phi2)
    double v_formula = 0; // |I . (1, -i)|
    double literal = 0;   // |W . (1, -i)|, vanishes identically for Phi1 in the tau sector
};

VelocityIntegrals dirac_velocity(const Mesh& mesh, const DofMap& dofs, double g, const CVec& phi1,
                                 const CVec& phi2);

struct ConeFit {
    double h = 0.0;
    std::vector<Vec2> directions;
    std::vector<double> upper, lower;  // Richardson-extrapolated slopes per direction
    double mean_upper = 0, mean_lower = 0, mean = 0;
    double isotropy_dev = 0;           // (max - min) / mean over upper and lower slopes
    double updown_dev = 0;             // |mean_upper - mean_lower| / mean
    bool step_warning = false;         // Richardson correction above 30 %
};

std::vector<Vec2> probe_directions(int count);

ConeFit cone_fit(const Mesh& mesh, double g, const Vec2& K, int n, double lambda_D,
                 const std::vector<Vec2>& directions, double h, const SolverOptions& opt = {});

struct DiracReport {
    double g = 0;
    int n = 0;
    double lambda_D = 0;
    double degeneracy_gap = 0;
    std::vector<std::string> labels;
    double v_formula = 0;
    double v_literal = 0;
    std::vector<double> v_cone;
    double v_cone_mean = 0;
    double isotropy_dev = 0;
    bool passed_nondegeneracy = false;
};

DiracReport dirac_report(const Mesh& mesh, double g, int nbands, bool with_cone, const SolverOptions& opt = {});
std::string to_json(const DiracReport& r);

// Lowest three eigenvalues at K split into the simple branch in the 1-sector
// and the tau/tau_bar pair.
struct BranchData {
    double g = 0;
    std::vector<double> lambda;    // lowest three at K
    double lambda_one = 0;         // simple branch
    double lambda_pair = 0;        // mean of the pair
    int one_index = 0;             // 1-based band index of the simple branch
    SectorLabel one_label = SectorLabel::Mixed;
    std::vector<SectorLabel> pair_labels;
};

BranchData branches_at_K(const Mesh& mesh, double g, const SolverOptions& opt = {});

struct TransitionResult {
    bool bracketed = false;
    double g_c = 0;
    double g_lo = 0, g_hi = 0;
    double spread_rel = 0;          // max-min of the three eigenvalues at g_c, relative
    std::vector<BranchData> history;
};

// Bisection on sign(lambda_one - lambda_pair) at K.
TransitionResult transition_scan(const Mesh& mesh, double g_lo, double g_hi, double tol = 1e-6,
                                 const SolverOptions& opt = {});

struct VdRow {
    double g = 0, lambda_D = 0, v_formula = 0, v_cone = 0, g_times_v = 0;
};

struct VdScaling {
    std::vector<VdRow> rows;
    double slope = 0;
    double spread_rel = 0;  // (max - min) / mean of g v
    double plateau = 0;     // g v at the largest g
};

VdScaling vd_scaling_study(const Mesh& mesh, const std::vector<double>& g_list, bool with_cone = false,
                           const SolverOptions& opt = {});

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bfem
