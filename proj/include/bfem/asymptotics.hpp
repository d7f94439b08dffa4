#pragma once

#include <vector>

#include "bfem/dirac.hpp"

namespace bfem {

// Discrete K-pseudo-periodic Dirichlet orbitals. p_A (p_B) is the inclusion
// Dirichlet eigenfunction of index n on the A (B) disc, positive mean, extended
// by zero; as Bloch DOF vectors they are M-normalized over the cell.
struct Orbital {
    int n = 1;          // Dirichlet index with multiplicity
    double delta = 0;   // discrete inclusion eigenvalue
    Vec2 K;
    CVec pA, pB;
    DofMap dofs;        // Bloch DOFs at K
};

// Rejects indices whose disc eigenvalue violates condition (S) (p >= 1 modes).
Orbital build_orbital(const Mesh& mesh, const Vec2& K, int n = 1);

// High-contrast expansion of the Dirac pair. With A(g) = A+ + g A- (inclusion
// and bulk parts), D the DOFs interior to the inclusions and E the rest:
//   u1_E  solves  A-_EE u1 = -[(A+ - delta M) pA]_E
//   lambda1 = -u1^H A- u1
//   w     solves  (A+ - delta M)_DD w = -[(A+ - delta M) u1]_D + lambda1 M pA,  w orthogonal to pA, pB
//   u2_E  solves  A-_EE u2 = -[(A+ - delta M)(u1 + w) - lambda1 M pA]_E
struct Expansion {
    Orbital orb;
    SpMat Aplus, Aminus, M;
    std::vector<int> D, E;
    CVec corrector;       // u1 on E, zero on D
    CVec w;               // inclusion correction on D
    CVec u2;              // second-order bulk field
    double lambda1 = 0;
    double lambda1_trace = 0;       // <r0, u1>, the discrete Neumann-trace pairing
    double solvability = 0;         // size of the bordered multipliers (should vanish)
};

Expansion build_expansion(const Mesh& mesh, int n = 1);

// -int_{Omega-} |grad u1|^2
double lambda1_coeff(const Expansion& ex);

struct QuasiMode {
    CVec u;
    double lambda = 0;
};

// M = 0: pA + u1/g with delta;  M = 1: pA + (u1 + w)/g + u2/g^2 with delta + lambda1/g.
QuasiMode quasimode(const Expansion& ex, double g, int order);

// sqrt(r^H A(g)^{-1} r) for r = A(g) u - lambda M u, u M-normalized.
double quasimode_residual(const Expansion& ex, double g, const QuasiMode& q);

struct HighContrastRow {
    double g = 0;
    double lambda_D = 0;
    double prediction_M0 = 0, prediction_M1 = 0;
    double residual_M0 = 0, residual_M1 = 0;
    double eta_M0 = 0, eta_M1 = 0;
    double l2_dev = 0, h1_dev = 0;        // Phi1 against pA
    double l2_dev_B = 0, h1_dev_B = 0;    // Phi2 against e^{-2 pi i/3} pB
    double v_formula = 0;
};

struct HighContrastStudy {
    double delta = 0, lambda1 = 0, lambda1_trace = 0;
    std::vector<HighContrastRow> rows;
    double slope_residual_M0 = 0, slope_residual_M1 = 0;
    double slope_eta_M0 = 0, slope_eta_M1 = 0;
    double slope_l2 = 0, slope_h1 = 0;
    double fitted_lambda1 = 0;   // least-squares slope of (lambda_D - delta) against 1/g
};

HighContrastStudy high_contrast_study(const Mesh& mesh, const std::vector<double>& g_list,
                                      const SolverOptions& opt = {});

}  // namespace bfem
