#include <doctest.h>

#include <cmath>

#include "bfem/asymptotics.hpp"
#include "bfem/bessel.hpp"

using namespace bfem;

namespace {

const Mesh& mesh1()
{
    static const Mesh m = build_mesh(CellGeometry{}, 1, 2);
    return m;
}

const Expansion& expansion1()
{
    static const Expansion e = build_expansion(mesh1(), 1);
    return e;
}

}  // namespace

TEST_CASE("orbital construction")
{
    const Mesh& m = mesh1();
    const Vec2 K = vertex_points(m.basis).first;
    const Orbital o = build_orbital(m, K, 1);
    const double oracle = disc_eigenvalue(0.2, 1).value;
    CHECK(std::abs(o.delta - oracle) / oracle < 5e-3);
    const SpMat M = assemble_mass(m, o.dofs);
    CHECK(std::abs(o.pA.dot(M * o.pA) - cplx(1.0)) < 1e-12);
    // supported on the A disc only
    for (int e = 0; e < m.num_elements(); ++e) {
        if (m.region[e] == Region::InclusionA) continue;
        for (int k = 0; k < m.nodes_per_element; ++k)
            REQUIRE(std::abs(o.pA[o.dofs.node_to_dof[m.element(e)[k]]]) < 1e-14);
    }
    // positive mean
    const DofMap all = make_dofmap(m, {BCKind::CellNeumann});
    const CVec w = assemble_mass(m, all, {1.0, 0.0, 0.0}) * CVec::Ones(all.size());
    cplx mean = 0;
    for (int i = 0; i < m.num_nodes(); ++i) mean += o.dofs.phase(i) * o.pA[o.dofs.node_to_dof[i]] * w[i];
    CHECK(mean.real() > 0);
    CHECK(std::abs(mean.imag()) < 1e-12);
    // and close to the exact radial mode
    CHECK(mean.real() == doctest::Approx(disc_eigenfunction_mean(1, 0.2)).epsilon(1e-2));
}

TEST_CASE("orbital index must satisfy the isolation condition")
{
    const Mesh& m = mesh1();
    const Vec2 K = vertex_points(m.basis).first;
    for (int n : {2, 3, 4, 5}) CHECK_THROWS_AS(build_orbital(m, K, n), std::invalid_argument);
    CHECK_THROWS_AS(build_orbital(m, Vec2::Zero(), 1), std::invalid_argument);
    const Orbital o6 = build_orbital(m, K, 6);
    CHECK(std::abs(o6.delta - disc_eigenvalue(0.2, 6).value) / o6.delta < 2e-2);
}

TEST_CASE("corrector")
{
    const Expansion& ex = expansion1();
    for (int d : ex.D) REQUIRE(ex.corrector[d] == cplx(0.0));
    CHECK(ex.corrector.dot(ex.Aminus * ex.corrector).real() > 0);
    const SymmetryAction rot = build_rotation_action(mesh1(), ex.orb.K);
    CHECK(classify(ex.corrector, rot, ex.M).label == SectorLabel::Tau);
    CHECK(classify(ex.w, rot, ex.M).label == SectorLabel::Tau);
    CHECK(ex.lambda1 < 0);
    CHECK(lambda1_coeff(ex) == ex.lambda1);
    CHECK(std::abs(ex.lambda1 - ex.lambda1_trace) < 1e-2 * std::abs(ex.lambda1));
    CHECK(ex.solvability < 1e-6);
    // w is M-orthogonal to the Dirichlet kernel
    CHECK(std::abs(ex.orb.pA.dot(ex.M * ex.w)) < 1e-10);
    CHECK(std::abs(ex.orb.pB.dot(ex.M * ex.w)) < 1e-10);
}

TEST_CASE("lambda1 is stable under refinement")
{
    const Expansion e2 = build_expansion(build_mesh(CellGeometry{}, 2, 2), 1);
    CHECK(std::abs(e2.lambda1 - expansion1().lambda1) < 0.02 * std::abs(e2.lambda1));
}

TEST_CASE("quasimode residuals decay at the predicted orders")
{
    const Expansion& ex = expansion1();
    std::vector<double> gs{1e3, 1e4}, e0, e1;
    for (double g : gs) {
        e0.push_back(quasimode_residual(ex, g, quasimode(ex, g, 0)));
        e1.push_back(quasimode_residual(ex, g, quasimode(ex, g, 1)));
        CHECK(e1.back() < e0.back());
    }
    CHECK(loglog_slope(gs, e0) == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(loglog_slope(gs, e1) == doctest::Approx(-2.0).epsilon(0.05));
    CHECK_THROWS_AS(quasimode(ex, 10.0, 2), std::invalid_argument);
}

TEST_CASE("high-contrast study closes against the band solver")
{
    const HighContrastStudy s = high_contrast_study(mesh1(), {1000, 3000, 10000});
    CHECK(s.slope_residual_M0 == doctest::Approx(-1.0).epsilon(0.15));
    CHECK(s.slope_residual_M1 == doctest::Approx(-2.0).epsilon(0.1));
    CHECK(std::abs(s.fitted_lambda1 - s.lambda1) < 0.05 * std::abs(s.lambda1));
    CHECK(s.slope_l2 == doctest::Approx(-1.0).epsilon(0.15));
    CHECK(s.slope_h1 == doctest::Approx(-1.0).epsilon(0.15));
    for (const auto& r : s.rows) {
        CHECK(r.residual_M1 < r.residual_M0);
        CHECK(r.eta_M1 < r.eta_M0);
        CHECK(std::abs(r.l2_dev_B - r.l2_dev) < 0.01 * r.l2_dev);
        CHECK(std::abs(r.h1_dev_B - r.h1_dev) < 0.01 * r.h1_dev);
    }
    CHECK_THROWS_AS(high_contrast_study(mesh1(), {1000}), std::invalid_argument);
}
