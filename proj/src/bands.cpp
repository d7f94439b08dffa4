#include "bfem/bands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bfem {

BandsAtK bands_at_k(const Mesh& mesh, double g, const Vec2& k, int nbands, bool want_vectors,
                    const SolverOptions& opt)
{
    if (nbands < 1) throw std::invalid_argument("bands_at_k: nbands must be >= 1");
    BlochOperatorMatrices op = assemble_bloch(mesh, g, k);
    const auto pairs = solve_gep(op.A, op.M, nbands, opt);
    BandsAtK out;
    for (const auto& p : pairs) out.lambda.push_back(p.lambda);
    if (want_vectors) {
        out.vectors.resize(op.A.rows(), nbands);
        for (int i = 0; i < nbands; ++i) out.vectors.col(i) = pairs[i].vector;
        out.dofs = std::move(op.dofs);
        out.M = std::move(op.M);
    }
    return out;
}

BandTable sweep_path(const Mesh& mesh, double g, const KPath& path, int nbands, const SolverOptions& opt)
{
    BandTable t;
    t.samples = path.samples();
    t.g = g;
    t.nbands = nbands;
    t.refine = mesh.refine;
    t.order = mesh.order;
    t.nseg = mesh.geom.nseg;
    t.R0 = mesh.geom.R0;
    t.bands.resize(static_cast<Eigen::Index>(t.samples.size()), nbands);
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        const auto b = bands_at_k(mesh, g, t.samples[i].k, nbands, false, opt);
        for (int n = 0; n < nbands; ++n) t.bands(static_cast<Eigen::Index>(i), n) = b.lambda[n];
    }
    return t;
}

std::string mesh_provenance(const Mesh& mesh)
{
    std::ostringstream os;
    os << "R0=" << format_double(mesh.geom.R0) << " nseg=" << mesh.geom.nseg << " refine=" << mesh.refine
       << " order=" << mesh.order << " elements=" << mesh.num_elements() << " dofs=" << mesh.num_torus_nodes();
    return os.str();
}

void write_band_csv(std::ostream& os, const BandTable& t, const OutputHeader& h)
{
    write_header(os, h);
    os << "# g: " << format_double(t.g) << '\n';
    std::vector<std::string> cols{"arclength", "kx", "ky"};
    for (int n = 1; n <= t.nbands; ++n) cols.push_back("lambda_" + std::to_string(n));
    write_columns(os, cols);
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        std::vector<double> row{t.samples[i].arclength, t.samples[i].k.x(), t.samples[i].k.y()};
        for (int n = 0; n < t.nbands; ++n) row.push_back(t.bands(static_cast<Eigen::Index>(i), n));
        write_row(os, row);
    }
}

CellSpectra cell_spectra(const Mesh& mesh, double g, int count, const SolverOptions& opt)
{
    CellSpectra c;
    c.g = g;
    for (BCKind kind : {BCKind::CellNeumann, BCKind::CellDirichlet}) {
        const auto op = assemble_cell_variant(mesh, g, kind);
        auto& dst = kind == BCKind::CellNeumann ? c.neumann : c.dirichlet;
        for (const auto& p : solve_gep(op.A, op.M, count, opt)) dst.push_back(p.lambda);
    }
    return c;
}

BracketResult bracket(const CellSpectra& cells, int n, const Vec2& k, double bloch_n)
{
    if (n < 1 || n > static_cast<int>(cells.dirichlet.size()))
        throw std::invalid_argument("bracket: band index outside the computed cell spectra");
    BracketResult r;
    r.n = n;
    r.k = k;
    r.neumann = cells.neumann[n - 1];
    r.dirichlet = cells.dirichlet[n - 1];
    r.bloch = bloch_n;
    const double eps = 1e-8 * r.dirichlet;
    r.holds = r.neumann <= r.bloch + eps && r.bloch <= r.dirichlet + eps;
    return r;
}

BracketResult bracketing_check(const Mesh& mesh, double g, int n, const Vec2& k, const SolverOptions& opt)
{
    if (n < 1) throw std::invalid_argument("bracketing_check: n must be >= 1");
    const CellSpectra cells = cell_spectra(mesh, g, n, opt);
    const auto b = bands_at_k(mesh, g, k, n, false, opt);
    return bracket(cells, n, k, b.lambda[n - 1]);
}

MonotonicityResult monotonicity_scan(const Mesh& mesh, const Vec2& k, int n, const std::vector<double>& g_list,
                                     const SolverOptions& opt)
{
    if (g_list.size() < 2) throw std::invalid_argument("monotonicity_scan: need at least two contrasts");
    if (!std::is_sorted(g_list.begin(), g_list.end()) ||
        std::adjacent_find(g_list.begin(), g_list.end()) != g_list.end())
        throw std::invalid_argument("monotonicity_scan: contrasts must be strictly ascending");
    MonotonicityResult r;
    r.n = n;
    r.k = k;
    r.g = g_list;
    for (double g : g_list) {
        const auto b = bands_at_k(mesh, g, k, std::max(n, 2), false, opt);
        r.lambda.push_back(b.lambda[n - 1]);
    }
    r.holds = true;
    if (n == 1 && k.isZero(0.0)) {
        for (std::size_t i = 0; i < g_list.size(); ++i) {
            const auto b = bands_at_k(mesh, g_list[i], k, 2, false, opt);
            r.holds = r.holds && std::abs(r.lambda[i]) <= 1e-8 * b.lambda[1];
        }
    } else {
        for (std::size_t i = 1; i < r.lambda.size(); ++i) r.holds = r.holds && r.lambda[i] > r.lambda[i - 1];
    }
    return r;
}

GapReport gap_report(const BandTable& t, int n)
{
    if (n < 1 || n >= t.nbands) throw std::invalid_argument("gap_report: table needs at least n + 1 bands");
    GapReport r;
    r.n = n;
    r.sup_band = t.bands.col(n - 1).maxCoeff();
    r.inf_next = t.bands.col(n).minCoeff();
    r.gap_exists = r.sup_band < r.inf_next;
    return r;
}

UniformLimitResult uniform_limit_check(const Mesh& mesh, int n, const std::vector<double>& g_list,
                                       const std::vector<Vec2>& k_samples, const SolverOptions& opt)
{
    if (n < 1) throw std::invalid_argument("uniform_limit_check: n must be >= 1");
    for (const Vec2& k : k_samples)
        if (k.norm() < 1e-3) throw std::invalid_argument("uniform_limit_check: k samples must avoid Gamma");
    UniformLimitResult r;
    r.n = n;
    const auto dir = assemble_inclusion_dirichlet(mesh);
    r.delta = solve_gep(dir.A, dir.M, n, opt)[n - 1].lambda;
    for (double g : g_list) {
        UniformLimitRow row;
        row.g = g;
        for (const Vec2& k : k_samples) {
            const auto b = bands_at_k(mesh, g, k, 2 * n, false, opt);
            row.even_dev = std::max(row.even_dev, std::abs(b.lambda[2 * n - 1] - r.delta));
            row.odd_dev = std::max(row.odd_dev, std::abs(b.lambda[2 * n - 2] - r.delta));
        }
        row.odd_at_gamma = bands_at_k(mesh, g, Vec2::Zero(), 2 * n, false, opt).lambda[2 * n - 2];
        r.rows.push_back(row);
    }
    r.even_decreasing = r.odd_decreasing = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        r.even_decreasing = r.even_decreasing && r.rows[i].even_dev < r.rows[i - 1].even_dev;
        r.odd_decreasing = r.odd_decreasing && r.rows[i].odd_dev < r.rows[i - 1].odd_dev;
    }
    return r;
}

}  // namespace bfem
