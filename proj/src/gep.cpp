#include "bfem/gep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace bfem {

namespace {

void check_hermitian(const SpMat& A)
{
    const SpMat D = A - SpMat(A.adjoint());
    double amax = 0, dmax = 0;
    for (int c = 0; c < A.outerSize(); ++c)
        for (SpMat::InnerIterator it(A, c); it; ++it) amax = std::max(amax, std::abs(it.value()));
    for (int c = 0; c < D.outerSize(); ++c)
        for (SpMat::InnerIterator it(D, c); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
    if (dmax > 1e-10 * amax) throw std::invalid_argument("solve_gep: matrix is not Hermitian");
}

CMat random_block(std::mt19937_64& rng, int n, int b)
{
    std::normal_distribution<double> nd;
    CMat X(n, b);
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = cplx(nd(rng), nd(rng));
    return X;
}

std::vector<EigenPair> dense_solve(const SpMat& A, const SpMat& M, int nev, const SolverOptions& opt)
{
    const CMat Ad = CMat(A), Md = CMat(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(Ad, Md, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw SolverError("solve_gep: dense generalized solve failed", 0.0);
    const int n = static_cast<int>(A.rows());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (opt.shift) {
        const double s = *opt.shift;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a] - s) < std::abs(es.eigenvalues()[b] - s);
        });
        order.resize(nev);
        std::sort(order.begin(), order.end());
    } else {
        order.resize(nev);
    }
    std::vector<EigenPair> out;
    for (int i : order) out.push_back({es.eigenvalues()[i], es.eigenvectors().col(i)});
    return out;
}

class ShiftInvert {
public:
    ShiftInvert(const SpMat& A, const SpMat& M, double sigma, bool definite) : definite_(definite)
    {
        const SpMat S = A - cplx(sigma) * M;
        if (definite_) {
            ldlt_.compute(S);
            if (ldlt_.info() != Eigen::Success) throw SolverError("solve_gep: LDLT factorization failed", sigma);
        } else {
            lu_.analyzePattern(S);
            lu_.factorize(S);
            if (lu_.info() != Eigen::Success) throw SolverError("solve_gep: LU factorization failed", sigma);
        }
    }
    CMat solve(const CMat& B) const { return definite_ ? CMat(ldlt_.solve(B)) : CMat(lu_.solve(B)); }

private:
    bool definite_;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

// Block Krylov space of (A - sigma M)^{-1} M, M-orthonormal basis, Rayleigh-Ritz
// with A, explicit restart from the leading Ritz vectors.
std::vector<EigenPair> krylov_solve(const SpMat& A, const SpMat& M, int nev, const SolverOptions& opt)
{
    const int n = static_cast<int>(A.rows());
    const bool interior = opt.shift.has_value();
    const double sigma = interior ? *opt.shift : default_shift(A, M);
    const ShiftInvert op(A, M, sigma, !interior);

    const int b = std::min(n, nev + 3);
    const int target = std::max(2 * nev + 20, 3 * b);
    int s = std::max(3, (target + b - 1) / b);
    while (s > 2 && b * s > n) --s;
    const int m = b * s;

    std::mt19937_64 rng(opt.seed);
    CMat X = random_block(rng, n, b);
    CMat V(n, m), MV(n, m);

    auto append = [&](CMat block, int& ncols) {
        for (int j = 0; j < block.cols(); ++j) {
            CVec x = block.col(j);
            for (int attempt = 0; attempt < 3; ++attempt) {
                const double n0 = std::sqrt(std::abs(x.dot(M * x)));
                for (int pass = 0; pass < 2; ++pass) {
                    if (ncols > 0) x -= V.leftCols(ncols) * (MV.leftCols(ncols).adjoint() * x);
                }
                const CVec mx = M * x;
                const double nrm = std::sqrt(std::abs(x.dot(mx)));
                if (nrm > 1e-10 * n0 && nrm > 0) {
                    V.col(ncols) = x / nrm;
                    MV.col(ncols) = mx / nrm;
                    ++ncols;
                    break;
                }
                x = random_block(rng, n, 1).col(0);
            }
        }
    };

    double best = 1e300;
    for (int cycle = 0; cycle < opt.max_restarts; ++cycle) {
        int ncols = 0;
        append(X, ncols);
        int start = 0;
        for (int j = 1; j < s; ++j) {
            const int prev = ncols;
            if (prev == start) break;
            const CMat W = op.solve(MV.middleCols(start, prev - start));
            append(W, ncols);
            start = prev;
        }
        const CMat Vc = V.leftCols(ncols);
        CMat H = Vc.adjoint() * (A * Vc);
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMat> es(H);
        std::vector<int> order(ncols);
        std::iota(order.begin(), order.end(), 0);
        if (interior)
            std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
                return std::abs(es.eigenvalues()[a] - sigma) < std::abs(es.eigenvalues()[c] - sigma);
            });
        const int keep = std::min(b, ncols);
        CMat Y(n, keep);
        std::vector<double> lam(keep);
        for (int i = 0; i < keep; ++i) {
            Y.col(i) = Vc * es.eigenvectors().col(order[i]);
            lam[i] = es.eigenvalues()[order[i]];
        }
        const CMat AY = A * Y, MY = M * Y;
        // relative to the spectral window, so eigenvalues near zero are not held to an absolute floor
        double window = std::abs(sigma);
        for (int i = 0; i < nev; ++i) window = std::max(window, std::abs(lam[i]));
        double worst = 0;
        for (int i = 0; i < nev; ++i) {
            const CVec r = AY.col(i) - lam[i] * MY.col(i);
            const double scale = std::max(window, 1e-300);
            worst = std::max(worst, r.norm() / scale);
        }
        if (worst <= opt.tol) {
            std::vector<EigenPair> out;
            for (int i = 0; i < nev; ++i) out.push_back({lam[i], Y.col(i)});
            std::sort(out.begin(), out.end(), [](const auto& a, const auto& c) { return a.lambda < c.lambda; });
            return out;
        }
        best = std::min(best, worst);
        X = Y;
    }
    throw SolverError("solve_gep: no convergence (best relative residual " + std::to_string(best) + ")", sigma);
}

}  // namespace

double default_shift(const SpMat& A, const SpMat& M)
{
    double s = 0;
    const Eigen::Index n = A.rows();
    for (Eigen::Index i = 0; i < n; ++i) s += A.coeff(i, i).real() / M.coeff(i, i).real();
    return -1e-6 * s / static_cast<double>(n);
}

std::vector<EigenPair> solve_gep(const SpMat& A, const SpMat& M, int nev, const SolverOptions& opt)
{
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || M.rows() != n || M.cols() != n) throw std::invalid_argument("solve_gep: size mismatch");
    if (nev < 1 || nev > n) throw std::invalid_argument("solve_gep: need 1 <= nev <= dim");
    check_hermitian(A);
    if (n < opt.dense_threshold || 4 * (nev + 3) > n) return dense_solve(A, M, nev, opt);
    return krylov_solve(A, M, nev, opt);
}

double relative_residual(const SpMat& A, const SpMat& M, const EigenPair& p, double scale)
{
    const CVec r = A * p.vector - p.lambda * (M * p.vector);
    const double xm = std::sqrt(std::abs(p.vector.dot(M * p.vector)));
    return r.norm() / xm / std::max({std::abs(p.lambda), scale, 1e-300});
}

std::vector<std::vector<int>> eigen_clusters(const std::vector<EigenPair>& pairs, double rel_tol)
{
    std::vector<std::vector<int>> out;
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
        if (!out.empty()) {
            const double a = pairs[out.back().back()].lambda, c = pairs[i].lambda;
            if (std::abs(c - a) <= rel_tol * std::max({std::abs(a), std::abs(c), 1e-300})) {
                out.back().push_back(i);
                continue;
            }
        }
        out.push_back({i});
    }
    return out;
}

}  // namespace bfem
