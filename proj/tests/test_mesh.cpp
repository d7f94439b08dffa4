#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "bfem/mesh.hpp"

using namespace bfem;

namespace {

void check_action(const Mesh& m, const GroupAction& a)
{
    const Vec2 xc = m.group.x_c;
    REQUIRE(a.perm.size() == static_cast<std::size_t>(m.num_torus_nodes()));
    std::set<int> image(a.perm.begin(), a.perm.end());
    CHECK(image.size() == a.perm.size());
    double err = 0;
    for (int t = 0; t < m.num_torus_nodes(); ++t) {
        const Vec2 x = m.nodes[m.torus_rep[t]];
        const Vec2 y = xc + a.linear * (x - xc);
        err = std::max(err, (y - m.nodes[m.torus_rep[a.perm[t]]] - a.shift[t]).norm());
    }
    CHECK(err < 1e-12);
}

}  // namespace

TEST_CASE("geometry validation")
{
    CHECK_NOTHROW(CellGeometry{}.validate(2));
    CHECK_THROWS_AS(CellGeometry({0.2, 50}).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(CellGeometry({0.3, 96}).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(CellGeometry({-0.1, 96}).validate(2), std::invalid_argument);
    CHECK(CellGeometry{}.segments_at(2) == 96);
    CHECK(CellGeometry{}.segments_at(3) == 192);
    CHECK(CellGeometry{}.segments_at(1) == 48);
}

TEST_CASE("areas and element size")
{
    for (int refine = 0; refine <= 2; ++refine) {
        const Mesh m = build_mesh(CellGeometry{}, refine, 2);
        CHECK(m.total_area() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-13));
        const double poly = inscribed_polygon_area(0.2, m.geom.segments_at(refine));
        CHECK(m.region_area(Region::InclusionA) == doctest::Approx(poly).epsilon(1e-12));
        CHECK(m.region_area(Region::InclusionB) == doctest::Approx(poly).epsilon(1e-12));
        for (int e = 0; e < m.num_elements(); ++e) REQUIRE(m.element_area(e) > 0);
    }
    const Mesh m2 = build_mesh(CellGeometry{}, 2, 2);
    CHECK(m2.max_element_diameter() <= 0.032);
    const Mesh m3 = build_mesh(CellGeometry{}, 3, 1);
    CHECK(m3.max_element_diameter() <= 0.5 * m2.max_element_diameter() + 1e-12);
}

TEST_CASE("periodic identification")
{
    const Mesh m = build_mesh(CellGeometry{}, 1, 2);
    REQUIRE(!m.periodic_pairs.empty());
    const LatticeBasis& b = m.basis;
    for (const auto& p : m.periodic_pairs) {
        CHECK((m.nodes[p.partner] - m.nodes[p.node] - p.shift).norm() < 1e-12);
        CHECK(m.torus_id[p.node] == m.torus_id[p.partner]);
        const double n1 = b.k1.dot(p.shift) / (2 * kPi), n2 = b.k2.dot(p.shift) / (2 * kPi);
        CHECK(std::abs(n1 - std::round(n1)) < 1e-12);
        CHECK(std::abs(n2 - std::round(n2)) < 1e-12);
    }
    Vec2 shift;
    const int t = find_torus_node(m, m.nodes[5] + b.v1 - 2.0 * b.v2, &shift);
    CHECK(t == m.torus_id[5]);
}

TEST_CASE("point-group invariance of the mesh")
{
    const Mesh m = build_mesh(CellGeometry{}, 1, 2);
    check_action(m, m.rot_action);
    check_action(m, m.inv_action);
    const GroupAction r3 = compose(m.rot_action, compose(m.rot_action, m.rot_action));
    for (int t = 0; t < m.num_torus_nodes(); ++t) REQUIRE(r3.perm[t] == t);
    CHECK((r3.linear - Mat2::Identity()).norm() < 1e-14);
}

TEST_CASE("P2 midpoints and interpolation")
{
    const Mesh m = build_mesh(CellGeometry{}, 0, 2);
    REQUIRE(m.nodes_per_element == 6);
    std::vector<cplx> lin(m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i) lin[i] = cplx(2 * m.nodes[i].x() - m.nodes[i].y(), 1.0);
    const Vec2 x(0.1, 0.05);
    const cplx v = interpolate(m, lin, x);
    CHECK(std::abs(v - cplx(2 * x.x() - x.y(), 1.0)) < 1e-12);
    CHECK_THROWS_AS(interpolate(m, lin, Vec2(50, 50)), std::invalid_argument);
}

TEST_CASE("mesh text round trip")
{
    const Mesh m = build_mesh(CellGeometry{}, 0, 2);
    std::stringstream ss;
    write_mesh(m, ss);
    const Mesh r = read_mesh(ss);
    CHECK(r.num_nodes() == m.num_nodes());
    CHECK(r.num_elements() == m.num_elements());
    CHECK(r.conn == m.conn);
    CHECK(r.torus_id == m.torus_id);
    double err = 0;
    for (int i = 0; i < m.num_nodes(); ++i) err = std::max(err, (r.nodes[i] - m.nodes[i]).norm());
    CHECK(err == 0.0);
}

TEST_CASE("square mesh")
{
    const Mesh s = build_square_mesh(4, 2);
    CHECK_FALSE(s.periodic);
    CHECK(s.total_area() == doctest::Approx(1.0));
}

TEST_CASE("inscribed polygon area deficit")
{
    for (int nseg : {24, 48, 96}) {
        const double R0 = 0.2, disc = kPi * R0 * R0;
        const Mesh m = build_mesh(CellGeometry{R0, nseg}, 2, 1);
        const double area = m.region_area(Region::InclusionA);
        // series of (n/2) R0^2 sin(2 pi / n): deficit <= (2 pi^3 / 3) R0^2 / n^2
        CHECK(area < disc);
        CHECK(disc - area <= 2 * std::pow(kPi, 3) / 3 * R0 * R0 / (nseg * nseg));
        CHECK(area == doctest::Approx(0.5 * nseg * R0 * R0 * std::sin(2 * kPi / nseg)).epsilon(1e-13));
    }
}
