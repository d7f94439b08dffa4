#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfem/fem.hpp"

namespace bfem {

struct EigenPair {
    double lambda = 0.0;
    CVec vector;  // M-normalized
};

struct SolverOptions {
    double tol = 1e-9;                  // relative residual
    std::optional<double> shift;        // interior targeting; default: just below the spectrum
    int dense_threshold = 600;          // dense solve below this many DOFs
    unsigned long long seed = 20240611ULL;
    int max_restarts = 80;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double shift) : std::runtime_error(what), shift_(shift) {}
    double shift() const { return shift_; }

private:
    double shift_;
};

// Smallest (or nearest-to-shift) nev eigenpairs of A x = lambda M x, ascending.
std::vector<EigenPair> solve_gep(const SpMat& A, const SpMat& M, int nev, const SolverOptions& opt = {});

// ||A x - lambda M x||_2 / ||x||_M, relative to max(|lambda|, scale).
double relative_residual(const SpMat& A, const SpMat& M, const EigenPair& p, double scale = 0.0);

// Default shift: -1e-6 times the mean diagonal ratio A_ii / M_ii.
double default_shift(const SpMat& A, const SpMat& M);

// Groups ascending eigenvalues into clusters with relative spread below rel_tol.
std::vector<std::vector<int>> eigen_clusters(const std::vector<EigenPair>& pairs, double rel_tol = 1e-9);

}  // namespace bfem
