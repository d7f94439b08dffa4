#include <doctest.h>

#include <random>

#include "bfem/gep.hpp"

using namespace bfem;

namespace {

// 2D Laplacian-like Hermitian pencil with a complex coupling, HPD mass
void pencil(int n, SpMat& A, SpMat& M)
{
    std::vector<Eigen::Triplet<cplx>> ta, tm;
    for (int i = 0; i < n; ++i) {
        ta.emplace_back(i, i, 2.0 + 0.01 * i);
        tm.emplace_back(i, i, 1.0);
        if (i + 1 < n) {
            const cplx c(-1.0, 0.3);
            ta.emplace_back(i, i + 1, c);
            ta.emplace_back(i + 1, i, std::conj(c));
            tm.emplace_back(i, i + 1, 0.1);
            tm.emplace_back(i + 1, i, 0.1);
        }
    }
    A.resize(n, n);
    M.resize(n, n);
    A.setFromTriplets(ta.begin(), ta.end());
    M.setFromTriplets(tm.begin(), tm.end());
}

}  // namespace

TEST_CASE("Krylov path agrees with the dense solver")
{
    SpMat A, M;
    pencil(1200, A, M);
    SolverOptions dense;
    dense.dense_threshold = 100000;
    const auto ref = solve_gep(A, M, 6, dense);
    const auto got = solve_gep(A, M, 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(got[i].lambda == doctest::Approx(ref[i].lambda).epsilon(1e-10));
        CHECK(relative_residual(A, M, got[i]) < 1e-9);
        CHECK(std::abs(got[i].vector.dot(M * got[i].vector) - cplx(1.0)) < 1e-10);
    }
}

TEST_CASE("interior shift targets the nearest eigenvalues")
{
    SpMat A, M;
    pencil(900, A, M);
    SolverOptions dense;
    dense.dense_threshold = 100000;
    const auto all = solve_gep(A, M, 900, dense);
    const double sigma = 0.5 * (all[300].lambda + all[301].lambda);
    SolverOptions o;
    o.shift = sigma;
    const auto got = solve_gep(A, M, 2, o);
    CHECK(got[0].lambda == doctest::Approx(all[300].lambda).epsilon(1e-10));
    CHECK(got[1].lambda == doctest::Approx(all[301].lambda).epsilon(1e-10));
}

TEST_CASE("input validation")
{
    SpMat A, M;
    pencil(50, A, M);
    CHECK_THROWS_AS(solve_gep(A, M, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_gep(A, M, 51), std::invalid_argument);
    SpMat B = A;
    B.coeffRef(0, 1) += cplx(0.5, 0);
    CHECK_THROWS_AS(solve_gep(B, M, 2), std::invalid_argument);
}

TEST_CASE("non-convergence reports the shift")
{
    SpMat A, M;
    pencil(2000, A, M);
    SolverOptions o;
    o.tol = 1e-30;
    o.max_restarts = 2;
    try {
        solve_gep(A, M, 3, o);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.shift() == doctest::Approx(default_shift(A, M)));
    }
}

TEST_CASE("default shift sits just below the spectrum")
{
    SpMat A, M;
    pencil(50, A, M);
    const double s = default_shift(A, M);
    CHECK(s < 0);
    CHECK(s > -1e-5);
}

TEST_CASE("clusters")
{
    std::vector<EigenPair> p(5);
    const double v[5] = {1.0, 2.0, 2.0 + 1e-12, 2.0 + 2e-12, 3.0};
    for (int i = 0; i < 5; ++i) p[i].lambda = v[i];
    const auto c = eigen_clusters(p, 1e-9);
    REQUIRE(c.size() == 3);
    CHECK(c[1].size() == 3);
}
