#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bfem/gep.hpp"
#include "bfem/io.hpp"

namespace bfem {

struct BandsAtK {
    std::vector<double> lambda;  // ascending
    CMat vectors;                // M-orthonormal columns (empty unless requested)
    DofMap dofs;
    SpMat M;
};

BandsAtK bands_at_k(const Mesh& mesh, double g, const Vec2& k, int nbands, bool want_vectors = false,
                    const SolverOptions& opt = {});

struct BandTable {
    std::vector<KPath::Sample> samples;
    double g = 0.0;
    int nbands = 0;
    Eigen::MatrixXd bands;  // rows = k samples, cols = band index
    int refine = 0, order = 2, nseg = 0;
    double R0 = 0.0;
};

BandTable sweep_path(const Mesh& mesh, double g, const KPath& path, int nbands, const SolverOptions& opt = {});

// CSV: arclength,kx,ky,lambda_1..lambda_n
void write_band_csv(std::ostream& os, const BandTable& t, const OutputHeader& h);
std::string mesh_provenance(const Mesh& mesh);

// Cell Neumann / Dirichlet spectra bounding every Bloch spectrum at contrast g.
struct CellSpectra {
    double g = 0.0;
    std::vector<double> neumann, dirichlet;
};

CellSpectra cell_spectra(const Mesh& mesh, double g, int count, const SolverOptions& opt = {});

struct BracketResult {
    int n = 1;
    Vec2 k = Vec2::Zero();
    double neumann = 0, bloch = 0, dirichlet = 0;
    bool holds = false;
};

// eps = 1e-8 * dirichlet_n slack on both sides.
BracketResult bracket(const CellSpectra& cells, int n, const Vec2& k, double bloch_n);
BracketResult bracketing_check(const Mesh& mesh, double g, int n, const Vec2& k, const SolverOptions& opt = {});

struct MonotonicityResult {
    int n = 1;
    Vec2 k = Vec2::Zero();
    std::vector<double> g, lambda;
    bool holds = false;
};

// Strictly increasing in g, except n = 1 at k = 0 where lambda must stay at zero.
MonotonicityResult monotonicity_scan(const Mesh& mesh, const Vec2& k, int n, const std::vector<double>& g_list,
                                     const SolverOptions& opt = {});

struct GapReport {
    int n = 1;
    double sup_band = 0, inf_next = 0;
    bool gap_exists = false;
};

GapReport gap_report(const BandTable& t, int n);

struct UniformLimitRow {
    double g = 0;
    double even_dev = 0;     // max_k |lambda_{2n} - delta_n|
    double odd_dev = 0;      // max_k |lambda_{2n-1} - delta_n| over k away from 0
    double odd_at_gamma = 0; // lambda_{2n-1}(g; 0)
};

struct UniformLimitResult {
    int n = 1;
    double delta = 0;  // discrete inclusion Dirichlet eigenvalue (with multiplicity index n)
    std::vector<UniformLimitRow> rows;
    bool even_decreasing = false;
    bool odd_decreasing = false;
};

// k_samples must avoid a neighbourhood of 0; Gamma is evaluated separately.
UniformLimitResult uniform_limit_check(const Mesh& mesh, int n, const std::vector<double>& g_list,
                                       const std::vector<Vec2>& k_samples, const SolverOptions& opt = {});

}  // namespace bfem
