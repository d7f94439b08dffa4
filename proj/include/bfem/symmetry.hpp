#pragma once

#include <string>
#include <vector>

#include "bfem/fem.hpp"

namespace bfem {

// Point-group actions at a rotation-invariant quasimomentum K, acting on Bloch
// DOF vectors of the pseudoperiodic form (one value per torus node).
//
// With S(x) = x_c + L (x - x_c) and S(x_t) = x_{perm t} + v_t (v_t a lattice
// vector), K-quasi-periodicity gives u(S(x_t)) = e^{iK.v_t} u(x_{perm t}):
//   rotation:   (R u)(x)  = u(x_c + R^T (x - x_c))   ->  u'_t = e^{ iK.v_t} u_{perm t}
//   PC:         (PC u)(x) = conj(u(2 x_c - x))       ->  u'_t = e^{-iK.v_t} conj(u_{perm t})
// Both maps send the discrete space onto itself because the mesh is invariant.

enum class SymmetryKind { Rotation, Inversion };

struct SymmetryAction {
    std::vector<int> perm;
    std::vector<cplx> phase;
    SymmetryKind kind = SymmetryKind::Rotation;
    bool conjugating = false;

    CVec apply(const CVec& u) const;
    CVec apply_power(const CVec& u, int m) const;
};

SymmetryAction build_rotation_action(const Mesh& mesh, const Vec2& K);
SymmetryAction build_pc_action(const Mesh& mesh, const Vec2& K);

enum class SectorLabel { One, Tau, TauBar, Mixed };

const char* sector_name(SectorLabel l);
cplx sector_value(SectorLabel l);  // 1, tau, conj(tau)

struct Classification {
    SectorLabel label = SectorLabel::Mixed;
    cplx mu;
};

// mu = <R u, u>_M / <u, u>_M; label = nearest of {1, tau, tau_bar} within tol.
Classification classify(const CVec& u, const SymmetryAction& rot, const SpMat& M, double tol = 0.05);

// Spectral projector (1/3) sum_m conj(nu)^m R^m onto the nu-sector.
CVec sector_projector(const CVec& u, const SymmetryAction& rot, SectorLabel label);

// M-normalized vector in span(basis) lying in the requested sector.
// Throws std::runtime_error if the span has no such component (norm < 1e-6).
CVec project_symmetry(const CMat& basis, const SymmetryAction& rot, const SpMat& M, SectorLabel label);

// Eigen-decomposition of R restricted to an M-orthonormal cluster basis: one
// label per direction, sorted One, Tau, TauBar, Mixed.
std::vector<Classification> classify_cluster(const CMat& basis, const SymmetryAction& rot, const SpMat& M,
                                             double tol = 0.05);

// max over random vectors of ||A R x - R A x|| / (||A|| ||x||)
double commutation_residual(const SpMat& A, const SymmetryAction& rot, int samples, unsigned long long seed);

}  // namespace bfem
