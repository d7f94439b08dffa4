#include <doctest.h>

#include <random>

#include "bfem/asymptotics.hpp"

using namespace bfem;

namespace {

CVec random_vec(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVec x(n);
    for (int i = 0; i < n; ++i) x[i] = cplx(nd(rng), nd(rng));
    return x;
}

struct Fixture {
    Mesh mesh = build_mesh(CellGeometry{}, 1, 2);
    Vec2 K = vertex_points(mesh.basis).first;
    SymmetryAction rot = build_rotation_action(mesh, K);
    SymmetryAction pc = build_pc_action(mesh, K);
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "group relations")
{
    const CVec x = random_vec(mesh.num_torus_nodes(), 3);
    CHECK((rot.apply_power(x, 3) - x).norm() < 1e-12 * x.norm());
    CHECK((pc.apply(pc.apply(x)) - x).norm() < 1e-12 * x.norm());
    // inversion commutes with the rotation; the antilinear part swaps tau and tau_bar
    CHECK((pc.apply(rot.apply(pc.apply(x))) - rot.apply(x)).norm() < 1e-12 * x.norm());
}

TEST_CASE_FIXTURE(Fixture, "actions preserve the M inner product")
{
    const SpMat M = assemble_mass(mesh, make_dofmap(mesh, {BCKind::Bloch, K}));
    const CVec x = random_vec(M.rows(), 5), y = random_vec(M.rows(), 6);
    const cplx a = x.dot(M * y);
    CHECK(std::abs(rot.apply(x).dot(M * rot.apply(y)) - a) < 1e-12 * std::abs(a) + 1e-12);
    CHECK(std::abs(pc.apply(x).dot(M * pc.apply(y)) - std::conj(a)) < 1e-12 * std::abs(a) + 1e-12);
}

TEST_CASE_FIXTURE(Fixture, "rotation commutes with the K-fiber operator")
{
    for (double g : {1.0, 13.0, 1000.0}) {
        const auto op = assemble_bloch(mesh, g, K);
        CHECK(commutation_residual(op.A, rot, 20, 11) < 1e-12);
        CHECK(commutation_residual(op.M, rot, 20, 12) < 1e-12);
    }
}

TEST_CASE_FIXTURE(Fixture, "sector projectors split a vector")
{
    const CVec x = random_vec(mesh.num_torus_nodes(), 9);
    const CVec s = sector_projector(x, rot, SectorLabel::One) + sector_projector(x, rot, SectorLabel::Tau) +
                   sector_projector(x, rot, SectorLabel::TauBar);
    CHECK((s - x).norm() < 1e-12 * x.norm());
    const SpMat M = assemble_mass(mesh, make_dofmap(mesh, {BCKind::Bloch, K}));
    for (SectorLabel l : {SectorLabel::One, SectorLabel::Tau, SectorLabel::TauBar}) {
        const Classification c = classify(sector_projector(x, rot, l), rot, M);
        CHECK(c.label == l);
        CHECK(std::abs(c.mu - sector_value(l)) < 1e-10);
    }
    CHECK(classify(x, rot, M).label == SectorLabel::Mixed);
    CHECK(std::string(sector_name(SectorLabel::TauBar)) == "tau_bar");
}

TEST_CASE_FIXTURE(Fixture, "orbital symmetry")
{
    const Orbital o = build_orbital(mesh, K, 1);
    const SpMat M = assemble_mass(mesh, o.dofs);
    CHECK(classify(o.pA, rot, M).label == SectorLabel::Tau);
    CHECK((rot.apply(o.pA) - PointGroupData::honeycomb().tau * o.pA).norm() < 1e-10 * o.pA.norm());
    CHECK(classify(pc.apply(o.pA), rot, M).label == SectorLabel::TauBar);
    CHECK((pc.apply(o.pA) - std::polar(1.0, -2 * kPi / 3) * o.pB).norm() < 1e-10 * o.pA.norm());
}

TEST_CASE("actions need a rotation-invariant quasimomentum")
{
    const Mesh mesh = build_mesh(CellGeometry{}, 0, 2);
    CHECK_THROWS(build_rotation_action(mesh, Vec2(0.4, 0.1)));
    CHECK_NOTHROW(build_rotation_action(mesh, Vec2::Zero()));
    CHECK_NOTHROW(build_pc_action(mesh, vertex_points(mesh.basis).second));
}
