#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "bfem/mesh.hpp"

namespace bfem {

using SpMat = Eigen::SparseMatrix<cplx>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

enum class BCKind { Bloch, CellDirichlet, CellNeumann, InclusionDirichlet };

const char* bc_name(BCKind kind);

// Pseudoperiodic: DOFs are values of the Bloch mode u itself; a node that is a
// lattice translate x_rep + v of its representative carries u = e^{ik.v} U.
// The discrete space is then mapped onto itself by the lattice point group.
// ShiftedGradient: DOFs are the periodic part phi = e^{-ik.x} u, identified
// without phase, and k enters the element forms through grad + ik.
enum class BlochForm { Pseudoperiodic, ShiftedGradient };

struct BC {
    BCKind kind = BCKind::Bloch;
    Vec2 k = Vec2::Zero();                 // Bloch only
    Region inclusion = Region::InclusionA; // InclusionDirichlet only
    BlochForm form = BlochForm::Pseudoperiodic;
};

// Reduced degrees of freedom. Bloch: one DOF per torus node. CellNeumann: one
// per node. CellDirichlet: nodes off the cell boundary. InclusionDirichlet:
// nodes interior to one inclusion.
struct DofMap {
    std::vector<int> node_to_dof;  // -1 for eliminated nodes
    std::vector<int> dof_node;     // a representative node per DOF
    std::vector<cplx> node_phase;  // nodal value = phase * DOF value; empty means 1
    int size() const { return static_cast<int>(dof_node.size()); }
    cplx phase(int node) const { return node_phase.empty() ? cplx(1.0) : node_phase[node]; }
};

DofMap make_dofmap(const Mesh& mesh, const BC& bc);

// Per-region coefficient: [inclusionA, inclusionB, bulk]; zero skips the region.
using RegionWeights = std::array<double, 3>;

inline RegionWeights sigma_weights(double g) { return {1.0, 1.0, g}; }

// A_ij = sum_T w_T int_T (grad + i k) phi_j . conj((grad + i k) phi_i), with the
// DofMap phases applied; pass k = 0 for the pseudoperiodic form.
SpMat assemble_stiffness(const Mesh& mesh, const DofMap& dofs, const Vec2& k, const RegionWeights& w);
// M_ij = sum_T w_T int_T phi_j phi_i
SpMat assemble_mass(const Mesh& mesh, const DofMap& dofs, const RegionWeights& w = {1.0, 1.0, 1.0});

struct BlochOperatorMatrices {
    SpMat A;
    SpMat M;
    BC bc;
    double g = 1.0;
    DofMap dofs;
};

BlochOperatorMatrices assemble_bloch(const Mesh& mesh, double g, const Vec2& k,
                                     BlochForm form = BlochForm::Pseudoperiodic);
BlochOperatorMatrices assemble_cell_variant(const Mesh& mesh, double g, BCKind kind);
BlochOperatorMatrices assemble_inclusion_dirichlet(const Mesh& mesh, Region inclusion = Region::InclusionA);

// Bloch DOFs that belong to at least one bulk element (interface included).
std::vector<int> bulk_dofs(const Mesh& mesh, const DofMap& dofs);
// Bloch DOFs interior to the inclusions (no bulk element touches them).
std::vector<int> inclusion_interior_dofs(const Mesh& mesh, const DofMap& dofs);

// Discrete Neumann trace of an inclusion eigenfunction by volume integrals:
// v -> int_{Omega+} (grad pA . conj(grad v) - delta pA conj(v)), for pA and v in
// the Bloch space described by `dofs` (pseudoperiodic form at quasimomentum K).
// Returned over all Bloch DOFs; entries vanish away from the inclusion interface.
CVec corrector_rhs(const Mesh& mesh, const DofMap& dofs, const CVec& pA, double delta);

// Nodal values over all mesh nodes of a Bloch DOF vector (phases applied).
std::vector<cplx> expand_to_nodes(const DofMap& dofs, const CVec& u);

// Coordinate (triplet) text dump, one "row col re im" line per stored entry.
void write_triplets(const SpMat& A, std::ostream& os);

// Quadrature on the reference triangle, barycentric points, weights summing to 1.
struct TriangleRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

TriangleRule triangle_rule(int degree);  // exact to the given degree; 2 and 4 are the default rules
TriangleRule collapsed_gauss_rule(int n); // n x n conical product, exact to degree 2n - 2

// Element-level quantities shared by assembly and post-processing.
struct ElementBasis {
    int nloc = 6;
    double area = 0;
    std::array<Vec2, 3> grad_bary;
    void values(const std::array<double, 3>& L, double* N) const;
    void gradients(const std::array<double, 3>& L, Vec2* dN) const;
};

ElementBasis element_basis(const Mesh& mesh, int e);

// Element stiffness/mass with a chosen rule; used by the quadrature-exactness check.
void element_matrices(const Mesh& mesh, int e, const Vec2& k, const TriangleRule& rule, CMat& Ke, CMat& Me);

}  // namespace bfem
