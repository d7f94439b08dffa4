#include "bfem/fem.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace bfem {

const char* bc_name(BCKind kind)
{
    switch (kind) {
    case BCKind::Bloch: return "bloch";
    case BCKind::CellDirichlet: return "cell-dirichlet";
    case BCKind::CellNeumann: return "cell-neumann";
    case BCKind::InclusionDirichlet: return "inclusion-dirichlet";
    }
    return "?";
}

TriangleRule triangle_rule(int degree)
{
    TriangleRule r;
    if (degree <= 2) {
        const double a = 2.0 / 3.0, b = 1.0 / 6.0;
        r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
        r.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
        return r;
    }
    if (degree <= 4) {
        // Dunavant, 6 points
        const double a = 0.44594849091596488632, wa = 0.22338158967801146570;
        const double b = 0.09157621350977074346, wb = 0.10995174365532186764;
        r.points = {{a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a},
                    {b, b, 1 - 2 * b}, {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
        r.weights = {wa, wa, wa, wb, wb, wb};
        return r;
    }
    return collapsed_gauss_rule((degree + 3) / 2);
}

TriangleRule collapsed_gauss_rule(int n)
{
    // Gauss-Legendre on [0,1] by Golub-Welsch
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);  // sums to 1
    }
    TriangleRule r;
    // (u, v) in unit square -> (u, (1-u) v), Jacobian (1-u); reference area 1/2
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double u = x[i], v = (1 - x[i]) * x[j];
            r.points.push_back({1 - u - v, u, v});
            r.weights.push_back(2.0 * w[i] * w[j] * (1 - x[i]));
        }
    return r;
}

void ElementBasis::values(const std::array<double, 3>& L, double* N) const
{
    if (nloc == 3) {
        N[0] = L[0];
        N[1] = L[1];
        N[2] = L[2];
        return;
    }
    for (int i = 0; i < 3; ++i) N[i] = L[i] * (2 * L[i] - 1);
    N[3] = 4 * L[0] * L[1];
    N[4] = 4 * L[1] * L[2];
    N[5] = 4 * L[2] * L[0];
}

void ElementBasis::gradients(const std::array<double, 3>& L, Vec2* dN) const
{
    if (nloc == 3) {
        for (int i = 0; i < 3; ++i) dN[i] = grad_bary[i];
        return;
    }
    for (int i = 0; i < 3; ++i) dN[i] = (4 * L[i] - 1) * grad_bary[i];
    dN[3] = 4 * (L[0] * grad_bary[1] + L[1] * grad_bary[0]);
    dN[4] = 4 * (L[1] * grad_bary[2] + L[2] * grad_bary[1]);
    dN[5] = 4 * (L[2] * grad_bary[0] + L[0] * grad_bary[2]);
}

ElementBasis element_basis(const Mesh& mesh, int e)
{
    const int* c = mesh.element(e);
    const Vec2 x0 = mesh.nodes[c[0]], x1 = mesh.nodes[c[1]], x2 = mesh.nodes[c[2]];
    Mat2 J;
    J.col(0) = x1 - x0;
    J.col(1) = x2 - x0;
    const double det = J.determinant();
    if (det <= 0) throw std::runtime_error("element with non-positive orientation");
    const Mat2 Jit = J.inverse().transpose();
    ElementBasis eb;
    eb.nloc = mesh.nodes_per_element;
    eb.area = 0.5 * det;
    eb.grad_bary[1] = Jit.col(0);
    eb.grad_bary[2] = Jit.col(1);
    eb.grad_bary[0] = -eb.grad_bary[1] - eb.grad_bary[2];
    return eb;
}

void element_matrices(const Mesh& mesh, int e, const Vec2& k, const TriangleRule& rule, CMat& Ke, CMat& Me)
{
    const ElementBasis eb = element_basis(mesh, e);
    const int n = eb.nloc;
    Ke.setZero(n, n);
    Me.setZero(n, n);
    double N[6];
    Vec2 dN[6];
    const double kk = k.squaredNorm();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const double w = rule.weights[q] * eb.area;
        eb.values(rule.points[q], N);
        eb.gradients(rule.points[q], dN);
        double kd[6];
        for (int i = 0; i < n; ++i) kd[i] = k.dot(dN[i]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                // (grad N_j + i k N_j) . conj(grad N_i + i k N_i)
                const double re = dN[i].dot(dN[j]) + kk * N[i] * N[j];
                const double im = N[j] * kd[i] - N[i] * kd[j];
                Ke(i, j) += w * cplx(re, im);
                Me(i, j) += w * N[i] * N[j];
            }
    }
}

DofMap make_dofmap(const Mesh& mesh, const BC& bc)
{
    DofMap d;
    const int n = mesh.num_nodes();
    d.node_to_dof.assign(n, -1);
    switch (bc.kind) {
    case BCKind::Bloch:
        for (int i = 0; i < n; ++i) d.node_to_dof[i] = mesh.torus_id[i];
        d.dof_node = mesh.torus_rep;
        if (bc.form == BlochForm::Pseudoperiodic && !bc.k.isZero(0.0)) {
            d.node_phase.resize(n);
            for (int i = 0; i < n; ++i) {
                const Vec2 v = mesh.nodes[i] - mesh.nodes[mesh.torus_rep[mesh.torus_id[i]]];
                d.node_phase[i] = std::polar(1.0, bc.k.dot(v));
            }
        }
        return d;
    case BCKind::CellNeumann:
        for (int i = 0; i < n; ++i) {
            d.node_to_dof[i] = i;
            d.dof_node.push_back(i);
        }
        return d;
    case BCKind::CellDirichlet:
        for (int i = 0; i < n; ++i)
            if (!mesh.on_cell_boundary[i]) {
                d.node_to_dof[i] = d.size();
                d.dof_node.push_back(i);
            }
        return d;
    case BCKind::InclusionDirichlet: {
        std::vector<char> inside(n, 0), outside(n, 0);
        for (int e = 0; e < mesh.num_elements(); ++e) {
            auto& flag = mesh.region[e] == bc.inclusion ? inside : outside;
            for (int k = 0; k < mesh.nodes_per_element; ++k) flag[mesh.element(e)[k]] = 1;
        }
        for (int i = 0; i < n; ++i)
            if (inside[i] && !outside[i]) {
                d.node_to_dof[i] = d.size();
                d.dof_node.push_back(i);
            }
        return d;
    }
    }
    return d;
}

namespace {

SpMat assemble(const Mesh& mesh, const DofMap& dofs, const Vec2& k, const RegionWeights& w, bool mass)
{
    const TriangleRule rule = triangle_rule(mesh.order == 2 ? 4 : 2);
    std::vector<Eigen::Triplet<cplx>> trip;
    const int n = mesh.nodes_per_element;
    trip.reserve(static_cast<std::size_t>(mesh.num_elements()) * n * n);
    CMat Ke, Me;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double we = w[static_cast<int>(mesh.region[e])];
        if (we == 0.0) continue;
        element_matrices(mesh, e, k, rule, Ke, Me);
        const CMat& E = mass ? Me : Ke;
        const int* c = mesh.element(e);
        for (int i = 0; i < n; ++i) {
            const int di = dofs.node_to_dof[c[i]];
            if (di < 0) continue;
            const cplx pi = std::conj(dofs.phase(c[i]));
            for (int j = 0; j < n; ++j) {
                const int dj = dofs.node_to_dof[c[j]];
                if (dj < 0) continue;
                trip.emplace_back(di, dj, we * pi * E(i, j) * dofs.phase(c[j]));
            }
        }
    }
    SpMat A(dofs.size(), dofs.size());
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

}  // namespace

SpMat assemble_stiffness(const Mesh& mesh, const DofMap& dofs, const Vec2& k, const RegionWeights& w)
{
    return assemble(mesh, dofs, k, w, false);
}

SpMat assemble_mass(const Mesh& mesh, const DofMap& dofs, const RegionWeights& w)
{
    return assemble(mesh, dofs, Vec2::Zero(), w, true);
}

BlochOperatorMatrices assemble_bloch(const Mesh& mesh, double g, const Vec2& k, BlochForm form)
{
    if (!(g > 0)) throw std::invalid_argument("assemble_bloch: contrast g must be positive");
    if (!mesh.periodic) throw std::invalid_argument("assemble_bloch: mesh is not periodic");
    BlochOperatorMatrices out;
    out.bc = {BCKind::Bloch, k, Region::InclusionA, form};
    out.g = g;
    out.dofs = make_dofmap(mesh, out.bc);
    const Vec2 shift = form == BlochForm::ShiftedGradient ? k : Vec2::Zero().eval();
    out.A = assemble_stiffness(mesh, out.dofs, shift, sigma_weights(g));
    out.M = assemble_mass(mesh, out.dofs);
    return out;
}

BlochOperatorMatrices assemble_cell_variant(const Mesh& mesh, double g, BCKind kind)
{
    if (!(g > 0)) throw std::invalid_argument("assemble_cell_variant: contrast g must be positive");
    if (kind != BCKind::CellDirichlet && kind != BCKind::CellNeumann)
        throw std::invalid_argument("assemble_cell_variant: kind must be cell-dirichlet or cell-neumann");
    BlochOperatorMatrices out;
    out.bc = {kind, Vec2::Zero(), Region::InclusionA};
    out.g = g;
    out.dofs = make_dofmap(mesh, out.bc);
    out.A = assemble_stiffness(mesh, out.dofs, Vec2::Zero(), sigma_weights(g));
    out.M = assemble_mass(mesh, out.dofs);
    return out;
}

BlochOperatorMatrices assemble_inclusion_dirichlet(const Mesh& mesh, Region inclusion)
{
    if (inclusion == Region::Bulk) throw std::invalid_argument("assemble_inclusion_dirichlet: need an inclusion region");
    BlochOperatorMatrices out;
    out.bc = {BCKind::InclusionDirichlet, Vec2::Zero(), inclusion};
    out.g = 1.0;
    out.dofs = make_dofmap(mesh, out.bc);
    if (out.dofs.size() == 0) throw std::invalid_argument("assemble_inclusion_dirichlet: mesh has no such inclusion");
    RegionWeights w{0, 0, 0};
    w[static_cast<int>(inclusion)] = 1.0;
    out.A = assemble_stiffness(mesh, out.dofs, Vec2::Zero(), w);
    out.M = assemble_mass(mesh, out.dofs, w);
    return out;
}

std::vector<int> bulk_dofs(const Mesh& mesh, const DofMap& dofs)
{
    std::vector<char> flag(dofs.size(), 0);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        if (mesh.region[e] != Region::Bulk) continue;
        for (int k = 0; k < mesh.nodes_per_element; ++k) {
            const int d = dofs.node_to_dof[mesh.element(e)[k]];
            if (d >= 0) flag[d] = 1;
        }
    }
    std::vector<int> out;
    for (int d = 0; d < dofs.size(); ++d)
        if (flag[d]) out.push_back(d);
    return out;
}

std::vector<int> inclusion_interior_dofs(const Mesh& mesh, const DofMap& dofs)
{
    std::vector<char> bulk(dofs.size(), 0);
    for (int d : bulk_dofs(mesh, dofs)) bulk[d] = 1;
    std::vector<int> out;
    for (int d = 0; d < dofs.size(); ++d)
        if (!bulk[d]) out.push_back(d);
    return out;
}

CVec corrector_rhs(const Mesh& mesh, const DofMap& dofs, const CVec& pA, double delta)
{
    const RegionWeights plus{1.0, 1.0, 0.0};
    const SpMat Ap = assemble_stiffness(mesh, dofs, Vec2::Zero(), plus);
    const SpMat Mp = assemble_mass(mesh, dofs, plus);
    return Ap * pA - delta * (Mp * pA);
}

std::vector<cplx> expand_to_nodes(const DofMap& dofs, const CVec& u)
{
    std::vector<cplx> out(dofs.node_to_dof.size(), cplx(0.0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int d = dofs.node_to_dof[i];
        if (d >= 0) out[i] = dofs.phase(static_cast<int>(i)) * u[d];
    }
    return out;
}

void write_triplets(const SpMat& A, std::ostream& os)
{
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "% " << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
    for (int c = 0; c < A.outerSize(); ++c)
        for (SpMat::InnerIterator it(A, c); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    os.precision(prec);
}

}  // namespace bfem
