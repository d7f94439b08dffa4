#pragma once

#include <vector>

#include "bfem/lattice.hpp"

namespace bfem {

// Bessel functions of the first kind, their positive zeros, and the Dirichlet
// spectrum of a disc of radius R0: eigenvalues (z_{p,q}/R0)^2.

double bessel_j(int p, double x);
double bessel_jprime(int p, double x);

struct BesselZero {
    int p = 0;
    int q = 1;
    double z = 0.0;
};

BesselZero bessel_zero(int p, int q);

struct DiscSpectrumEntry {
    double value = 0.0;
    int p = 0;
    int q = 1;
    int multiplicity = 1;
    bool satisfies_S = false;
    int first_index = 1;  // 1-based position of this value in the list with multiplicity
};

// Distinct eigenvalues in ascending order, enough of them to cover `count`
// eigenvalues counted with multiplicity.
std::vector<DiscSpectrumEntry> disc_spectrum(double R0, int count);

// n-th eigenvalue (1-based, with multiplicity) and its entry.
DiscSpectrumEntry disc_eigenvalue(double R0, int n);

// Simple and of nonzero mean: exactly the J0 modes.
bool condition_S(int p, int q);

// L2-normalized radial Dirichlet mode of J0 with zero index q, centred at the origin.
double disc_eigenfunction(int q, double R0, const Vec2& x);

// Exact mean value of disc_eigenfunction(q, R0, .) over the disc.
double disc_eigenfunction_mean(int q, double R0);

}  // namespace bfem
