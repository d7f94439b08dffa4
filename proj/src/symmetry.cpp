#include "bfem/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bfem {

namespace {

bool in_dual_lattice(const Vec2& q, const LatticeBasis& b)
{
    for (const Vec2& v : {b.v1, b.v2}) {
        const double t = q.dot(v) / (2.0 * kPi);
        if (std::abs(t - std::round(t)) > 1e-9) return false;
    }
    return true;
}

SymmetryAction build_action(const Mesh& mesh, const GroupAction& g, const Vec2& K, SymmetryKind kind, bool conj)
{
    const int n = mesh.num_torus_nodes();
    if (static_cast<int>(g.perm.size()) != n || static_cast<int>(g.shift.size()) != n)
        throw std::invalid_argument("symmetry: mesh carries no group action data");
    // u o S carries quasimomentum L^T K; conjugation flips its sign
    const Vec2 mapped = (conj ? -1.0 : 1.0) * (g.linear.transpose() * K);
    if (!in_dual_lattice(mapped - K, mesh.basis))
        throw std::invalid_argument("symmetry: quasimomentum is not invariant under the point-group map");
    const Vec2& xc = mesh.group.x_c;
    SymmetryAction a;
    a.kind = kind;
    a.conjugating = conj;
    a.perm = g.perm;
    a.phase.resize(n);
    std::vector<char> hit(n, 0);
    for (int t = 0; t < n; ++t) {
        const int s = g.perm[t];
        if (s < 0 || s >= n || hit[s]) throw std::invalid_argument("symmetry: node map is not a permutation");
        hit[s] = 1;
        const Vec2 x = mesh.nodes[mesh.torus_rep[t]];
        const Vec2 image = xc + g.linear * (x - xc);
        const Vec2 target = mesh.nodes[mesh.torus_rep[s]] + g.shift[t];
        if ((image - target).norm() > 1e-10)
            throw std::invalid_argument("symmetry: mesh is not invariant (node image misses by > 1e-10)");
        const double arg = K.dot(g.shift[t]);
        a.phase[t] = std::polar(1.0, conj ? -arg : arg);
    }
    return a;
}

}  // namespace

CVec SymmetryAction::apply(const CVec& u) const
{
    const Eigen::Index n = static_cast<Eigen::Index>(perm.size());
    if (u.size() != n) throw std::invalid_argument("symmetry: vector size does not match the action");
    CVec out(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const cplx v = u[perm[t]];
        out[t] = phase[t] * (conjugating ? std::conj(v) : v);
    }
    return out;
}

CVec SymmetryAction::apply_power(const CVec& u, int m) const
{
    CVec out = u;
    for (int i = 0; i < m; ++i) out = apply(out);
    return out;
}

SymmetryAction build_rotation_action(const Mesh& mesh, const Vec2& K)
{
    return build_action(mesh, mesh.rot_action, K, SymmetryKind::Rotation, false);
}

SymmetryAction build_pc_action(const Mesh& mesh, const Vec2& K)
{
    return build_action(mesh, mesh.inv_action, K, SymmetryKind::Inversion, true);
}

const char* sector_name(SectorLabel l)
{
    switch (l) {
    case SectorLabel::One: return "one";
    case SectorLabel::Tau: return "tau";
    case SectorLabel::TauBar: return "tau_bar";
    case SectorLabel::Mixed: return "mixed";
    }
    return "mixed";
}

cplx sector_value(SectorLabel l)
{
    const cplx tau = std::polar(1.0, 2.0 * kPi / 3.0);
    switch (l) {
    case SectorLabel::One: return 1.0;
    case SectorLabel::Tau: return tau;
    case SectorLabel::TauBar: return std::conj(tau);
    case SectorLabel::Mixed: break;
    }
    throw std::invalid_argument("sector_value: mixed has no eigenvalue");
}

namespace {

Classification label_of(cplx mu, double tol)
{
    Classification c{SectorLabel::Mixed, mu};
    double best = tol;
    for (SectorLabel l : {SectorLabel::One, SectorLabel::Tau, SectorLabel::TauBar}) {
        const double d = std::abs(mu - sector_value(l));
        if (d < best) {
            best = d;
            c.label = l;
        }
    }
    return c;
}

}  // namespace

Classification classify(const CVec& u, const SymmetryAction& rot, const SpMat& M, double tol)
{
    const double nrm = std::abs(u.dot(M * u));
    if (nrm == 0) throw std::invalid_argument("classify: zero vector");
    return label_of(u.dot(M * rot.apply(u)) / nrm, tol);
}

CVec sector_projector(const CVec& u, const SymmetryAction& rot, SectorLabel label)
{
    const cplx nu = sector_value(label);
    CVec acc = u;
    CVec r = u;
    cplx c = 1.0;
    for (int m = 1; m < 3; ++m) {
        r = rot.apply(r);
        c *= std::conj(nu);
        acc += c * r;
    }
    return acc / 3.0;
}

CVec project_symmetry(const CMat& basis, const SymmetryAction& rot, const SpMat& M, SectorLabel label)
{
    CVec best;
    double best_norm = 0;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        const CVec p = sector_projector(basis.col(j), rot, label);
        const double nrm = std::sqrt(std::abs(p.dot(M * p)));
        const double ref = std::sqrt(std::abs(basis.col(j).dot(M * basis.col(j))));
        if (nrm / ref > best_norm) {
            best_norm = nrm / ref;
            best = p / nrm;
        }
    }
    if (best_norm < 1e-6)
        throw std::runtime_error(std::string("project_symmetry: span has no ") + sector_name(label) + " component");
    return best;
}

std::vector<Classification> classify_cluster(const CMat& basis, const SymmetryAction& rot, const SpMat& M,
                                             double tol)
{
    const Eigen::Index d = basis.cols();
    CMat RB(basis.rows(), d);
    for (Eigen::Index j = 0; j < d; ++j) RB.col(j) = rot.apply(basis.col(j));
    const CMat C = basis.adjoint() * (M * RB);
    Eigen::ComplexEigenSolver<CMat> es(C);
    std::vector<Classification> out;
    for (Eigen::Index i = 0; i < d; ++i) out.push_back(label_of(es.eigenvalues()[i], tol));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    return out;
}

double commutation_residual(const SpMat& A, const SymmetryAction& rot, int samples, unsigned long long seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        CVec x(A.rows());
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = cplx(nd(rng), nd(rng));
        const CVec lhs = A * rot.apply(x);
        const CVec rhs = rot.apply(A * x);
        worst = std::max(worst, (lhs - rhs).norm() / (A * x).norm());
    }
    return worst;
}

}  // namespace bfem
