#include "bfem/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "bfem/bessel.hpp"

namespace bfem {

namespace {

SpMat submatrix(const SpMat& A, const std::vector<int>& rows, const std::vector<int>& cols)
{
    std::vector<int> rmap(A.rows(), -1), cmap(A.cols(), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) rmap[rows[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < cols.size(); ++i) cmap[cols[i]] = static_cast<int>(i);
    std::vector<Eigen::Triplet<cplx>> t;
    for (int c = 0; c < A.outerSize(); ++c) {
        if (cmap[c] < 0) continue;
        for (SpMat::InnerIterator it(A, c); it; ++it)
            if (rmap[it.row()] >= 0) t.emplace_back(rmap[it.row()], cmap[c], it.value());
    }
    SpMat S(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    S.setFromTriplets(t.begin(), t.end());
    return S;
}

CVec gather(const CVec& u, const std::vector<int>& idx)
{
    CVec out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = u[idx[i]];
    return out;
}

void scatter(const CVec& v, const std::vector<int>& idx, CVec& u)
{
    for (std::size_t i = 0; i < idx.size(); ++i) u[idx[i]] = v[static_cast<Eigen::Index>(i)];
}

double mnorm(const CVec& u, const SpMat& M) { return std::sqrt(std::abs(u.dot(M * u))); }

// Inclusion Dirichlet eigenfunction of index n carried over to the Bloch DOFs.
CVec disc_orbital(const Mesh& mesh, Region inc, int n, const DofMap& bloch, const SpMat& Mb, double& delta)
{
    const BlochOperatorMatrices op = assemble_inclusion_dirichlet(mesh, inc);
    const int nev = std::min(op.dofs.size(), n + 2);
    const auto pairs = solve_gep(op.A, op.M, nev);
    const double lam = pairs[n - 1].lambda;
    const double below = n > 1 ? pairs[n - 2].lambda : 0.0;
    const double above = n < nev ? pairs[n].lambda : 2 * lam;
    if (lam - below < 1e-6 * lam || above - lam < 1e-6 * lam)
        throw std::runtime_error("build_orbital: discrete inclusion eigenvalue is not simple");
    delta = lam;

    // int phi_i over the inclusion, for the sign of the mean
    RegionWeights w{0, 0, 0};
    w[static_cast<int>(inc)] = 1.0;
    const DofMap all = make_dofmap(mesh, {BCKind::CellNeumann});
    const CVec mass = assemble_mass(mesh, all, w) * CVec::Ones(all.size());

    CVec u = CVec::Zero(bloch.size());
    cplx mean = 0;
    for (int d = 0; d < op.dofs.size(); ++d) {
        const int node = op.dofs.dof_node[d];
        const cplx val = pairs[n - 1].vector[d];
        mean += val * mass[all.node_to_dof[node]];
        const int b = bloch.node_to_dof[node];
        if (b < 0) throw std::logic_error("build_orbital: inclusion node without a Bloch DOF");
        u[b] = val / bloch.phase(node);
    }
    if (std::abs(mean) == 0) throw std::runtime_error("build_orbital: orbital has zero mean");
    u *= std::conj(mean) / std::abs(mean);
    return u / mnorm(u, Mb);
}

}  // namespace

Orbital build_orbital(const Mesh& mesh, const Vec2& K, int n)
{
    if (n < 1) throw std::invalid_argument("build_orbital: index must be >= 1");
    const DiscSpectrumEntry e = disc_eigenvalue(mesh.geom.R0, n);
    if (!e.satisfies_S)
        throw std::invalid_argument("build_orbital: index " + std::to_string(n) + " is a J_" + std::to_string(e.p) +
                                    " mode; condition (S) needs a simple eigenvalue of nonzero mean (p = 0)");
    if (K.norm() < 1e-12) throw std::invalid_argument("build_orbital: K must be nonzero");
    Orbital o;
    o.n = n;
    o.K = K;
    o.dofs = make_dofmap(mesh, {BCKind::Bloch, K});
    const SpMat M = assemble_mass(mesh, o.dofs);
    double dB = 0;
    o.pA = disc_orbital(mesh, Region::InclusionA, n, o.dofs, M, o.delta);
    o.pB = disc_orbital(mesh, Region::InclusionB, n, o.dofs, M, dB);
    return o;
}

Expansion build_expansion(const Mesh& mesh, int n)
{
    const Vec2 K = vertex_points(mesh.basis).first;
    Expansion ex;
    ex.orb = build_orbital(mesh, K, n);
    const DofMap& dofs = ex.orb.dofs;
    const double delta = ex.orb.delta;
    ex.Aplus = assemble_stiffness(mesh, dofs, Vec2::Zero(), {1.0, 1.0, 0.0});
    ex.Aminus = assemble_stiffness(mesh, dofs, Vec2::Zero(), {0.0, 0.0, 1.0});
    ex.M = assemble_mass(mesh, dofs);
    ex.E = bulk_dofs(mesh, dofs);
    ex.D = inclusion_interior_dofs(mesh, dofs);
    const int nd = dofs.size();

    // bulk corrector
    const SpMat AEE = submatrix(ex.Aminus, ex.E, ex.E);
    Eigen::SimplicialLDLT<SpMat> bulk(AEE);
    if (bulk.info() != Eigen::Success) throw std::runtime_error("build_expansion: bulk operator is singular");
    const CVec r0 = corrector_rhs(mesh, dofs, ex.orb.pA, delta);
    const CVec u1E = bulk.solve(CVec(-gather(r0, ex.E)));
    ex.corrector = CVec::Zero(nd);
    scatter(u1E, ex.E, ex.corrector);
    ex.lambda1 = lambda1_coeff(ex);
    ex.lambda1_trace = r0.dot(ex.corrector).real();

    // inclusion correction, orthogonal to the Dirichlet kernel {pA, pB}
    const SpMat S = ex.Aplus - cplx(delta) * ex.M;
    const CVec Mu0 = ex.M * ex.orb.pA;
    const CVec bD = gather(CVec(cplx(ex.lambda1) * Mu0 - S * ex.corrector), ex.D);
    const SpMat SDD = submatrix(S, ex.D, ex.D);
    const SpMat MDD = submatrix(ex.M, ex.D, ex.D);
    const CVec zA = MDD * gather(ex.orb.pA, ex.D), zB = MDD * gather(ex.orb.pB, ex.D);
    const int m = static_cast<int>(ex.D.size());
    std::vector<Eigen::Triplet<cplx>> t;
    for (int c = 0; c < SDD.outerSize(); ++c)
        for (SpMat::InnerIterator it(SDD, c); it; ++it) t.emplace_back(it.row(), c, it.value());
    for (int i = 0; i < m; ++i) {
        if (zA[i] != cplx(0)) {
            t.emplace_back(i, m, zA[i]);
            t.emplace_back(m, i, std::conj(zA[i]));
        }
        if (zB[i] != cplx(0)) {
            t.emplace_back(i, m + 1, zB[i]);
            t.emplace_back(m + 1, i, std::conj(zB[i]));
        }
    }
    SpMat B(m + 2, m + 2);
    B.setFromTriplets(t.begin(), t.end());
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw std::runtime_error("build_expansion: bordered inclusion system is singular");
    CVec rhs = CVec::Zero(m + 2);
    rhs.head(m) = bD;
    const CVec sol = lu.solve(rhs);
    ex.w = CVec::Zero(nd);
    scatter(sol.head(m), ex.D, ex.w);
    ex.solvability = std::abs(sol[m]) + std::abs(sol[m + 1]);

    // second-order bulk field
    const CVec u1 = ex.corrector + ex.w;
    const CVec r1 = S * u1 - cplx(ex.lambda1) * Mu0;
    ex.u2 = CVec::Zero(nd);
    scatter(bulk.solve(CVec(-gather(r1, ex.E))), ex.E, ex.u2);
    return ex;
}

double lambda1_coeff(const Expansion& ex)
{
    return -ex.corrector.dot(ex.Aminus * ex.corrector).real();
}

QuasiMode quasimode(const Expansion& ex, double g, int order)
{
    if (order != 0 && order != 1) throw std::invalid_argument("quasimode: order must be 0 or 1");
    QuasiMode q;
    if (order == 0) {
        q.u = ex.orb.pA + ex.corrector / g;
        q.lambda = ex.orb.delta;
    } else {
        q.u = ex.orb.pA + (ex.corrector + ex.w) / g + ex.u2 / (g * g);
        q.lambda = ex.orb.delta + ex.lambda1 / g;
    }
    return q;
}

double quasimode_residual(const Expansion& ex, double g, const QuasiMode& q)
{
    const SpMat A = ex.Aplus + cplx(g) * ex.Aminus;
    const CVec u = q.u / mnorm(q.u, ex.M);
    const CVec r = A * u - cplx(q.lambda) * (ex.M * u);
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("quasimode_residual: A(g) factorization failed");
    return std::sqrt(std::abs(r.dot(ldlt.solve(r))));
}

HighContrastStudy high_contrast_study(const Mesh& mesh, const std::vector<double>& g_list, const SolverOptions& opt)
{
    if (g_list.size() < 2) throw std::invalid_argument("high_contrast_study: need at least two contrasts");
    const Expansion ex = build_expansion(mesh, 1);
    const Vec2 K = ex.orb.K;
    const SymmetryAction pc = build_pc_action(mesh, K);
    const cplx phase_B = std::polar(1.0, -2 * kPi / 3);
    const CVec pBs = phase_B * ex.orb.pB;
    // periodic-part H1: |(grad - iK) u|^2 + |u|^2
    const SpMat H1 = assemble_stiffness(mesh, ex.orb.dofs, Vec2(-K), {1.0, 1.0, 1.0}) + ex.M;

    HighContrastStudy s;
    s.delta = ex.orb.delta;
    s.lambda1 = ex.lambda1;
    s.lambda1_trace = ex.lambda1_trace;
    std::vector<double> gs, r0, r1, e0, e1, l2, h1;
    double sxy = 0, sxx = 0;
    for (double g : g_list) {
        const BandsAtK b = bands_at_k(mesh, g, K, 3, true, opt);
        const auto deg = detect_degeneracy(b.lambda);
        const int n = deg ? deg->n : 1;
        DiracBasis db = dirac_basis(mesh, b, n, K);
        const cplx c = ex.orb.pA.dot(b.M * db.phi1);
        CVec phi1 = db.phi1 * (std::conj(c) / std::abs(c));
        // the antiunitary PC picks up the conjugate phase
        const CVec phi2 = pc.apply(phi1);

        HighContrastRow row;
        row.g = g;
        row.lambda_D = db.lambda_D;
        row.prediction_M0 = ex.orb.delta;
        row.prediction_M1 = ex.orb.delta + ex.lambda1 / g;
        row.residual_M0 = std::abs(row.lambda_D - row.prediction_M0);
        row.residual_M1 = std::abs(row.lambda_D - row.prediction_M1);
        row.eta_M0 = quasimode_residual(ex, g, quasimode(ex, g, 0));
        row.eta_M1 = quasimode_residual(ex, g, quasimode(ex, g, 1));
        const CVec d1 = phi1 - ex.orb.pA, d2 = phi2 - pBs;
        row.l2_dev = mnorm(d1, ex.M);
        row.h1_dev = std::sqrt(std::abs(d1.dot(H1 * d1)));
        row.l2_dev_B = mnorm(d2, ex.M);
        row.h1_dev_B = std::sqrt(std::abs(d2.dot(H1 * d2)));
        row.v_formula = dirac_velocity(mesh, b.dofs, g, phi1, phi2).v_formula;
        s.rows.push_back(row);

        gs.push_back(g);
        r0.push_back(row.residual_M0);
        r1.push_back(row.residual_M1);
        e0.push_back(row.eta_M0);
        e1.push_back(row.eta_M1);
        l2.push_back(row.l2_dev);
        h1.push_back(row.h1_dev);
        sxy += (row.lambda_D - ex.orb.delta) / g;
        sxx += 1.0 / (g * g);
    }
    s.slope_residual_M0 = loglog_slope(gs, r0);
    s.slope_residual_M1 = loglog_slope(gs, r1);
    s.slope_eta_M0 = loglog_slope(gs, e0);
    s.slope_eta_M1 = loglog_slope(gs, e1);
    s.slope_l2 = loglog_slope(gs, l2);
    s.slope_h1 = loglog_slope(gs, h1);
    s.fitted_lambda1 = sxy / sxx;
    return s;
}

}  // namespace bfem
