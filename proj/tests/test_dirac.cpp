#include <doctest.h>

#include <cmath>

#include "bfem/bessel.hpp"
#include "bfem/dirac.hpp"

using namespace bfem;

namespace {

const Mesh& coarse()
{
    static const Mesh m = build_mesh(CellGeometry{}, 0, 2);
    return m;
}

}  // namespace

TEST_CASE("degeneracy detection on synthetic spectra")
{
    auto d = detect_degeneracy({1.0, 5.0, 5.0 + 1e-9, 7.0});
    REQUIRE(d);
    CHECK(d->n == 2);
    CHECK_FALSE(d->triple);
    CHECK(d->lambda_D == doctest::Approx(5.0));
    d = detect_degeneracy({5.0, 5.0 + 1e-9, 5.0 + 2e-9, 7.0});
    REQUIRE(d);
    CHECK(d->triple);
    CHECK_FALSE(detect_degeneracy({1.0, 2.0, 3.0}));
    CHECK_FALSE(detect_degeneracy({1.0, 2.0, 2.0}));  // top pair cannot be certified isolated
    CHECK_THROWS_AS(detect_degeneracy({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("Dirac point at K for g = 100")
{
    const Mesh& m = coarse();
    const Vec2 K = vertex_points(m.basis).first;
    const auto deg = detect_degeneracy(m, 100.0, K, 4);
    REQUIRE(deg);
    CHECK(deg->n == 1);
    CHECK(deg->gap_rel < 1e-9);
    CHECK(deg->lambda_D < disc_eigenvalue(0.2, 1).value);

    const BandsAtK b = bands_at_k(m, 100.0, K, 3, true);
    const DiracBasis db = dirac_basis(m, b, 1, K);
    CHECK(db.c1.label == SectorLabel::Tau);
    CHECK(db.c2.label == SectorLabel::TauBar);
    CHECK(db.overlap < 1e-10);
}

TEST_CASE("velocity formula: phase and valley invariance")
{
    const Mesh& m = coarse();
    const auto [K, Kp] = vertex_points(m.basis);
    const BandsAtK b = bands_at_k(m, 100.0, K, 3, true);
    const DiracBasis db = dirac_basis(m, b, 1, K);
    const VelocityIntegrals v = dirac_velocity(m, b.dofs, 100.0, db.phi1, db.phi2);
    CHECK(v.v_formula > 0);
    CHECK(v.literal < 1e-10 * v.v_formula);
    const cplx ph = std::polar(1.0, 0.731);
    const double v2 = dirac_velocity(m, b.dofs, 100.0, ph * db.phi1, std::conj(ph) * db.phi2).v_formula;
    CHECK(std::abs(v2 - v.v_formula) < 1e-8 * v.v_formula);
    // K' valley: conjugate the eigenvectors at K and redo the sector projection
    BandsAtK bp = b;
    bp.vectors = b.vectors.conjugate();
    bp.dofs = make_dofmap(m, {BCKind::Bloch, Kp});
    bp.M = assemble_mass(m, bp.dofs);
    const DiracBasis dq = dirac_basis(m, bp, 1, Kp);
    const double vp = dirac_velocity(m, bp.dofs, 100.0, dq.phi1, dq.phi2).v_formula;
    CHECK(std::abs(vp - v.v_formula) < 1e-8 * v.v_formula);
}

TEST_CASE("cone fit agrees with the velocity formula")
{
    const Mesh& m = coarse();
    const DiracReport r = dirac_report(m, 100.0, 3, true);
    REQUIRE(r.n == 1);
    CHECK(r.labels == std::vector<std::string>{"tau", "tau_bar"});
    CHECK(std::abs(r.v_cone_mean - r.v_formula) < 0.05 * r.v_formula);
    CHECK(r.isotropy_dev < 0.01);
    CHECK(r.passed_nondegeneracy);
    CHECK(to_json(r).find("\"v_formula\"") != std::string::npos);
}

TEST_CASE("cone slopes shrink with the contrast")
{
    const Mesh& m = coarse();
    double prev = 1e300;
    for (double g : {25.0, 100.0, 250.0}) {
        const DiracReport r = dirac_report(m, g, 3, true);
        REQUIRE(r.n == 1);
        CHECK(r.v_cone_mean < prev);
        prev = r.v_cone_mean;
    }
}

TEST_CASE("probe directions")
{
    const auto d = probe_directions(6);
    REQUIRE(d.size() == 6);
    for (const auto& x : d) CHECK(x.norm() == doctest::Approx(1.0));
    CHECK(std::abs(d[0].y() / d[0].x() - std::tan(kPi / 12)) < 1e-14);
}

TEST_CASE("transition of the Dirac cone")
{
    const Mesh& m = coarse();
    const TransitionResult t = transition_scan(m, 5.0, 30.0, 1e-4);
    REQUIRE(t.bracketed);
    CHECK(t.g_c > 8.0);
    CHECK(t.g_c < 20.0);
    CHECK(t.spread_rel < 1e-5);
    const BranchData lo = branches_at_K(m, 0.8 * t.g_c), hi = branches_at_K(m, 1.25 * t.g_c);
    CHECK(lo.one_index == 1);
    CHECK(hi.one_index == 3);
    for (const BranchData* b : {&lo, &hi}) {
        CHECK(b->one_label == SectorLabel::One);
        REQUIRE(b->pair_labels.size() == 2);
        CHECK(b->pair_labels[0] == SectorLabel::Tau);
        CHECK(b->pair_labels[1] == SectorLabel::TauBar);
    }
}

TEST_CASE("log-log slope")
{
    CHECK(loglog_slope({1, 10, 100}, {3, 0.3, 0.03}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(loglog_slope({1, 2}, {1, -1}), std::invalid_argument);
}
