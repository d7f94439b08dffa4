#include "bfem/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace bfem {

std::pair<Vec2, Vec2> dual_basis(const Vec2& v1, const Vec2& v2)
{
    const double det = v1.x() * v2.y() - v1.y() * v2.x();
    if (std::abs(det) < 1e-12)
        throw std::invalid_argument("dual_basis: degenerate basis (|v1 x v2| < 1e-12)");
    // rows of 2 pi V^{-1} with V = [v1 v2]
    Vec2 k1(v2.y() / det, -v2.x() / det);
    Vec2 k2(-v1.y() / det, v1.x() / det);
    return {2.0 * kPi * k1, 2.0 * kPi * k2};
}

LatticeBasis LatticeBasis::from_vectors(const Vec2& v1, const Vec2& v2, const Vec2& origin)
{
    LatticeBasis b;
    b.v1 = v1;
    b.v2 = v2;
    std::tie(b.k1, b.k2) = dual_basis(v1, v2);
    b.origin = origin;
    return b;
}

LatticeBasis LatticeBasis::honeycomb()
{
    const double s3 = std::sqrt(3.0);
    return from_vectors(Vec2(s3 / 2, 0.5), Vec2(s3 / 2, -0.5), Vec2(-1.0 / s3, 0.0));
}

double LatticeBasis::cell_area() const { return std::abs(v1.x() * v2.y() - v1.y() * v2.x()); }

Vec2 LatticeBasis::cell_coords(const Vec2& x) const
{
    const Vec2 d = x - origin;
    return Vec2(k1.dot(d), k2.dot(d)) / (2.0 * kPi);
}

Vec2 LatticeBasis::from_cell_coords(const Vec2& t) const { return origin + t.x() * v1 + t.y() * v2; }

PointGroupData PointGroupData::honeycomb()
{
    const double s3 = std::sqrt(3.0);
    PointGroupData d;
    d.R << -0.5, s3 / 2, -s3 / 2, -0.5;
    d.tau = std::polar(1.0, 2.0 * kPi / 3.0);
    d.xi = CVec2(cplx(1.0, 0.0), cplx(0.0, 1.0)) / std::sqrt(2.0);
    d.x_c = Vec2(1.0 / (2.0 * s3), -0.5);
    d.v_A = Vec2(0.0, 0.0);
    d.v_B = Vec2(1.0 / s3, 0.0);
    return d;
}

std::pair<Vec2, Vec2> vertex_points(const LatticeBasis& b)
{
    const Vec2 K = (b.k1 - b.k2) / 3.0;
    return {K, -K};
}

CellReduction reduce_to_cell(const Vec2& x, const LatticeBasis& b)
{
    const Vec2 t = b.cell_coords(x);
    CellReduction r;
    r.n1 = static_cast<long>(std::floor(t.x()));
    r.n2 = static_cast<long>(std::floor(t.y()));
    r.shift = b.lattice_vector(r.n1, r.n2);
    r.x0 = x - r.shift;
    return r;
}

std::vector<KPath::Sample> KPath::samples() const
{
    std::vector<Sample> out;
    if (waypoints.empty()) return out;
    double s = 0.0;
    out.push_back({waypoints.front().k, 0.0});
    for (std::size_t w = 0; w + 1 < waypoints.size(); ++w) {
        const Vec2 a = waypoints[w].k;
        const Vec2 b = waypoints[w + 1].k;
        const double len = (b - a).norm();
        for (int i = 1; i <= samples_per_segment; ++i) {
            const double t = double(i) / samples_per_segment;
            out.push_back({a + t * (b - a), s + t * len});
        }
        s += len;
    }
    return out;
}

std::size_t KPath::sample_count() const
{
    if (waypoints.empty()) return 0;
    return (waypoints.size() - 1) * static_cast<std::size_t>(samples_per_segment) + 1;
}

KPath kpath_MGKM(int samples, const LatticeBasis& b)
{
    if (samples < 1) throw std::invalid_argument("kpath_MGKM: samples must be >= 1");
    const Vec2 M = b.k1 / 2.0;
    const Vec2 K = vertex_points(b).first;
    KPath p;
    p.waypoints = {{"M", M}, {"G", Vec2::Zero()}, {"K", K}, {"M", M}};
    p.samples_per_segment = samples;
    return p;
}

}  // namespace bfem
