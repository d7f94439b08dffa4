#include "bfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bfem {

const char* region_name(Region r)
{
    switch (r) {
    case Region::InclusionA: return "inclusionA";
    case Region::InclusionB: return "inclusionB";
    case Region::Bulk: return "bulk";
    }
    return "?";
}

int CellGeometry::segments_at(int refine) const
{
    if (refine >= 2) return nseg << (refine - 2);
    return nseg >> (2 - refine);
}

void CellGeometry::validate(int refine) const
{
    if (!(R0 > 0)) throw std::invalid_argument("geometry: R0 must be positive");
    if (refine < 0) throw std::invalid_argument("mesh: refine must be >= 0");
    if (nseg <= 0 || nseg % 24 != 0)
        throw std::invalid_argument("geometry: nseg must be a positive multiple of 24 (six arcs per disc at refine 0)");
    if (2.0 * R0 >= 1.0 / std::sqrt(3.0) - 1e-6)
        throw std::invalid_argument("geometry: inclusions overlap or touch (2 R0 >= |v_B - v_A|)");
    // distance from each centre to the four rhombus edges
    const LatticeBasis b = LatticeBasis::honeycomb();
    const PointGroupData g = PointGroupData::honeycomb();
    const Vec2 corners[4] = {b.origin, b.origin + b.v1, b.origin + b.v1 + b.v2, b.origin + b.v2};
    for (const Vec2& c : {g.v_A, g.v_B}) {
        for (int i = 0; i < 4; ++i) {
            const Vec2 p = corners[i], q = corners[(i + 1) % 4];
            const Vec2 d = q - p;
            const double t = std::clamp((c - p).dot(d) / d.squaredNorm(), 0.0, 1.0);
            if ((p + t * d - c).norm() <= R0 + 1e-12)
                throw std::invalid_argument("geometry: inclusion touches the cell boundary");
        }
    }
}

namespace {

constexpr double kMergeTol = 1e-9;

class PointIndex {
public:
    explicit PointIndex(double cell = 1e-7) : cell_(cell) {}

    int find(const Vec2& x, double tol) const
    {
        const auto i0 = static_cast<std::int64_t>(std::floor(x.x() / cell_));
        const auto j0 = static_cast<std::int64_t>(std::floor(x.y() / cell_));
        for (std::int64_t di = -1; di <= 1; ++di)
            for (std::int64_t dj = -1; dj <= 1; ++dj) {
                auto it = map_.find(key(i0 + di, j0 + dj));
                if (it == map_.end()) continue;
                for (const auto& [p, id] : it->second)
                    if ((p - x).norm() <= tol) return id;
            }
        return -1;
    }

    void insert(const Vec2& x, int id)
    {
        const auto i0 = static_cast<std::int64_t>(std::floor(x.x() / cell_));
        const auto j0 = static_cast<std::int64_t>(std::floor(x.y() / cell_));
        map_[key(i0, j0)].push_back({x, id});
    }

private:
    static std::uint64_t key(std::int64_t i, std::int64_t j)
    {
        return (static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(j);
    }
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<Vec2, int>>> map_;
};

// Wrapped cell coordinates in [0,1)^2, with values within 1e-10 of 1 snapped to 0.
Vec2 torus_coords(const LatticeBasis& b, const Vec2& x)
{
    Vec2 t = b.cell_coords(x);
    for (int i = 0; i < 2; ++i) {
        t[i] -= std::floor(t[i]);
        if (t[i] > 1.0 - 1e-10) t[i] = 0.0;
    }
    return t;
}

class TorusIndex {
public:
    explicit TorusIndex(const Mesh& m) : basis_(m.basis)
    {
        for (int t = 0; t < m.num_torus_nodes(); ++t) index_.insert(torus_coords(basis_, m.nodes[m.torus_rep[t]]), t);
    }
    int find(const Vec2& x) const { return index_.find(torus_coords(basis_, x), 1e-9); }

private:
    LatticeBasis basis_;
    PointIndex index_;
};

Vec2 snap_lattice(const LatticeBasis& b, const Vec2& v, const char* what)
{
    const Vec2 t(b.k1.dot(v) / (2 * kPi), b.k2.dot(v) / (2 * kPi));
    const double n1 = std::round(t.x()), n2 = std::round(t.y());
    const Vec2 s = n1 * b.v1 + n2 * b.v2;
    if ((s - v).norm() > 1e-9) throw std::runtime_error(std::string(what) + ": mapped point misses every mesh node");
    return s;
}

bool is_lattice_vector(const LatticeBasis& b, const Vec2& v)
{
    const double t1 = b.k1.dot(v) / (2 * kPi), t2 = b.k2.dot(v) / (2 * kPi);
    return std::abs(t1 - std::round(t1)) < 1e-9 && std::abs(t2 - std::round(t2)) < 1e-9;
}

struct TriMesh {
    std::vector<Vec2> p;
    std::vector<char> on_arc;
    std::vector<std::array<int, 3>> t;
    std::vector<char> incl;
};

// Uniform red refinement; midpoints of arc edges are moved onto the circle.
TriMesh refine_red(const TriMesh& m, const Vec2& centre, double R)
{
    TriMesh out;
    out.p = m.p;
    out.on_arc = m.on_arc;
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        Vec2 x = 0.5 * (m.p[a] + m.p[b]);
        const bool arc = m.on_arc[a] && m.on_arc[b];
        if (arc) x = centre + R * (x - centre).normalized();
        const int id = static_cast<int>(out.p.size());
        out.p.push_back(x);
        out.on_arc.push_back(arc);
        mid[key] = id;
        return id;
    };
    for (std::size_t e = 0; e < m.t.size(); ++e) {
        const auto [a, b, c] = m.t[e];
        const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
        for (const auto& tri : {std::array<int, 3>{a, ab, ca}, {ab, b, bc}, {ca, bc, c}, {ab, bc, ca}}) {
            out.t.push_back(tri);
            out.incl.push_back(m.incl[e]);
        }
    }
    return out;
}

// One twelfth of the cell in local coordinates: V = (0,0) is the disc centre,
// M = (a,0) the bond midpoint, O = (a,1/2) the hexagon centre, a = 1/(2 sqrt 3).
TriMesh half_kite(double R0, int n0)
{
    const double a = 1.0 / (2.0 * std::sqrt(3.0));
    const double sector = kPi / 3.0;
    TriMesh m;
    // polar grid inside the disc sector
    std::vector<std::vector<int>> ring(n0 + 1);
    for (int i = 0; i <= n0; ++i) {
        for (int j = 0; j <= i; ++j) {
            Vec2 x = Vec2::Zero();
            if (i > 0) {
                const double th = sector * j / i;
                x = (R0 * i / n0) * Vec2(std::cos(th), std::sin(th));
            }
            ring[i].push_back(static_cast<int>(m.p.size()));
            m.p.push_back(x);
            m.on_arc.push_back(i == n0);
        }
    }
    auto add = [&](int p, int q, int r, bool incl) {
        const Vec2 u = m.p[q] - m.p[p], v = m.p[r] - m.p[p];
        if (u.x() * v.y() - u.y() * v.x() < 0) std::swap(q, r);
        m.t.push_back({p, q, r});
        m.incl.push_back(incl);
    };
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j <= i; ++j) {
            add(ring[i][j], ring[i + 1][j], ring[i + 1][j + 1], true);
            if (j < i) add(ring[i][j], ring[i + 1][j + 1], ring[i][j + 1], true);
        }
    }
    // bulk strip between the arc and the apothem x = a
    const int L = n0;
    std::vector<std::vector<int>> layer(L + 1);
    layer[0] = ring[n0];
    for (int l = 1; l <= L; ++l) {
        for (int j = 0; j <= n0; ++j) {
            const Vec2 inner = m.p[ring[n0][j]];
            const Vec2 outer(a, 0.5 * j / n0);
            layer[l].push_back(static_cast<int>(m.p.size()));
            m.p.push_back(inner + (double(l) / L) * (outer - inner));
            m.on_arc.push_back(false);
        }
    }
    for (int l = 0; l < L; ++l) {
        for (int j = 0; j < n0; ++j) {
            const int p00 = layer[l][j], p10 = layer[l][j + 1], p01 = layer[l + 1][j], p11 = layer[l + 1][j + 1];
            if ((m.p[p00] - m.p[p11]).norm() <= (m.p[p10] - m.p[p01]).norm()) {
                add(p00, p10, p11, false);
                add(p00, p11, p01, false);
            } else {
                add(p00, p10, p01, false);
                add(p10, p11, p01, false);
            }
        }
    }
    return m;
}

Mat2 rotation(double angle)
{
    Mat2 r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

void finalize_topology(Mesh& mesh)
{
    const int n = mesh.num_nodes();
    mesh.on_cell_boundary.assign(n, 0);
    mesh.torus_id.assign(n, -1);
    mesh.torus_rep.clear();
    mesh.periodic_pairs.clear();
    if (!mesh.periodic) {
        for (int i = 0; i < n; ++i) {
            mesh.torus_id[i] = i;
            mesh.torus_rep.push_back(i);
            const Vec2& x = mesh.nodes[i];
            mesh.on_cell_boundary[i] = std::abs(x.x()) < 1e-12 || std::abs(x.y()) < 1e-12 ||
                                       std::abs(x.x() - 1) < 1e-12 || std::abs(x.y() - 1) < 1e-12;
        }
        return;
    }
    PointIndex index;
    std::vector<std::vector<int>> members;
    for (int i = 0; i < n; ++i) {
        const Vec2 tc = mesh.basis.cell_coords(mesh.nodes[i]);
        for (int d = 0; d < 2; ++d)
            if (std::abs(tc[d]) < 1e-10 || std::abs(tc[d] - 1.0) < 1e-10) mesh.on_cell_boundary[i] = 1;
        const Vec2 key = torus_coords(mesh.basis, mesh.nodes[i]);
        int t = index.find(key, 1e-9);
        if (t < 0) {
            t = static_cast<int>(mesh.torus_rep.size());
            mesh.torus_rep.push_back(i);
            members.emplace_back();
            index.insert(key, t);
        }
        mesh.torus_id[i] = t;
        members[t].push_back(i);
    }
    for (const auto& group : members) {
        for (int a : group)
            for (int b : group)
                if (a != b)
                    mesh.periodic_pairs.push_back(
                        {a, b, snap_lattice(mesh.basis, mesh.nodes[b] - mesh.nodes[a], "periodic pairing")});
    }
}

GroupAction build_action(const Mesh& mesh, const Mat2& linear, const Vec2& centre, const char* what)
{
    TorusIndex index(mesh);
    GroupAction act;
    act.linear = linear;
    const int nt = mesh.num_torus_nodes();
    act.perm.resize(nt);
    act.shift.resize(nt);
    std::vector<char> hit(nt, 0);
    for (int t = 0; t < nt; ++t) {
        const Vec2 x = mesh.nodes[mesh.torus_rep[t]];
        const Vec2 y = centre + linear * (x - centre);
        const int s = index.find(y);
        if (s < 0) throw std::runtime_error(std::string(what) + ": mapped point misses every mesh node");
        act.perm[t] = s;
        act.shift[t] = snap_lattice(mesh.basis, y - mesh.nodes[mesh.torus_rep[s]], what);
        if (hit[s]++) throw std::runtime_error(std::string(what) + ": action is not a permutation");
    }
    return act;
}

void add_midside_nodes(Mesh& mesh, const std::vector<std::array<int, 3>>& tris)
{
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        const int id = mesh.num_nodes();
        mesh.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
        mid[key] = id;
        return id;
    };
    mesh.conn.clear();
    for (const auto& t : tris) {
        mesh.conn.insert(mesh.conn.end(), t.begin(), t.end());
        if (mesh.order == 2) {
            mesh.conn.push_back(midpoint(t[0], t[1]));
            mesh.conn.push_back(midpoint(t[1], t[2]));
            mesh.conn.push_back(midpoint(t[2], t[0]));
        }
    }
}

}  // namespace

double Mesh::element_area(int e) const
{
    const int* c = element(e);
    const Vec2 u = nodes[c[1]] - nodes[c[0]], v = nodes[c[2]] - nodes[c[0]];
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

double Mesh::region_area(Region r) const
{
    double s = 0;
    for (int e = 0; e < num_elements(); ++e)
        if (region[e] == r) s += element_area(e);
    return s;
}

double Mesh::total_area() const
{
    double s = 0;
    for (int e = 0; e < num_elements(); ++e) s += element_area(e);
    return s;
}

double Mesh::max_element_diameter() const
{
    double h = 0;
    for (int e = 0; e < num_elements(); ++e) {
        const int* c = element(e);
        for (int i = 0; i < 3; ++i) h = std::max(h, (nodes[c[i]] - nodes[c[(i + 1) % 3]]).norm());
    }
    return h;
}

double inscribed_polygon_area(double R0, int nseg)
{
    return 0.5 * nseg * R0 * R0 * std::sin(2.0 * kPi / nseg);
}

Mesh build_mesh(const CellGeometry& geom, int refine, int order)
{
    geom.validate(refine);
    if (order != 1 && order != 2) throw std::invalid_argument("mesh: order must be 1 or 2");

    const int n0 = geom.segments_at(0) / 6;  // six half-kites share each disc
    TriMesh hk = half_kite(geom.R0, n0);
    for (int r = 0; r < refine; ++r) hk = refine_red(hk, Vec2::Zero(), geom.R0);

    Mesh mesh;
    mesh.order = order;
    mesh.refine = refine;
    mesh.geom = geom;
    mesh.nodes_per_element = order == 2 ? 6 : 3;
    const LatticeBasis& b = mesh.basis;
    const PointGroupData& g = mesh.group;

    // Local frame -> base piece with V = v_B, M = bond midpoint, O = x_c.
    const Vec2 axis = (g.v_B - g.x_c).normalized();
    const Mat2 mirror = 2.0 * axis * axis.transpose() - Mat2::Identity();

    PointIndex index;
    std::vector<std::array<int, 3>> tris;
    for (int m = 0; m < 2; ++m) {
        for (int j = 0; j < 6; ++j) {
            const Mat2 lin = rotation(kPi / 3.0 * j) * (m ? mirror : Mat2::Identity());
            auto place = [&](const Vec2& loc) { return g.x_c + lin * (g.v_B - loc - g.x_c); };
            const Vec2 site = place(Vec2::Zero());
            Vec2 target = g.v_A;
            Region tag = Region::InclusionA;
            if (is_lattice_vector(b, site - g.v_B)) {
                target = g.v_B;
                tag = Region::InclusionB;
            }
            const Vec2 shift = snap_lattice(b, target - site, "mesh replication");
            std::vector<int> id(hk.p.size());
            for (std::size_t i = 0; i < hk.p.size(); ++i) {
                const Vec2 x = place(hk.p[i]) + shift;
                int k = index.find(x, kMergeTol);
                if (k < 0) {
                    k = static_cast<int>(mesh.nodes.size());
                    mesh.nodes.push_back(x);
                    index.insert(x, k);
                }
                id[i] = k;
            }
            for (std::size_t e = 0; e < hk.t.size(); ++e) {
                std::array<int, 3> t{id[hk.t[e][0]], id[hk.t[e][1]], id[hk.t[e][2]]};
                if (lin.determinant() < 0) std::swap(t[1], t[2]);
                tris.push_back(t);
                mesh.region.push_back(hk.incl[e] ? tag : Region::Bulk);
            }
        }
    }
    add_midside_nodes(mesh, tris);
    finalize_topology(mesh);
    mesh.rot_action = build_action(mesh, g.R.transpose(), g.x_c, "rotation action");
    mesh.inv_action = build_action(mesh, -Mat2::Identity(), g.x_c, "inversion action");
    return mesh;
}

Mesh build_square_mesh(int n, int order)
{
    if (n < 1) throw std::invalid_argument("square mesh: n must be >= 1");
    if (order != 1 && order != 2) throw std::invalid_argument("mesh: order must be 1 or 2");
    Mesh mesh;
    mesh.order = order;
    mesh.periodic = false;
    mesh.nodes_per_element = order == 2 ? 6 : 3;
    mesh.basis = LatticeBasis::from_vectors(Vec2(1, 0), Vec2(0, 1), Vec2(0, 0));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) mesh.nodes.push_back(Vec2(double(i) / n, double(j) / n));
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int p = j * (n + 1) + i;
            tris.push_back({p, p + 1, p + n + 2});
            tris.push_back({p, p + n + 2, p + n + 1});
            mesh.region.push_back(Region::Bulk);
            mesh.region.push_back(Region::Bulk);
        }
    add_midside_nodes(mesh, tris);
    finalize_topology(mesh);
    return mesh;
}

cplx interpolate(const Mesh& mesh, const std::vector<cplx>& nodal, const Vec2& x)
{
    if (nodal.size() != mesh.nodes.size()) throw std::invalid_argument("interpolate: nodal vector size mismatch");
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const int* c = mesh.element(e);
        const Vec2 a = mesh.nodes[c[0]], u = mesh.nodes[c[1]] - a, v = mesh.nodes[c[2]] - a;
        const double det = u.x() * v.y() - u.y() * v.x();
        const Vec2 d = x - a;
        const double l1 = (d.x() * v.y() - d.y() * v.x()) / det;
        const double l2 = (u.x() * d.y() - u.y() * d.x()) / det;
        const double l0 = 1.0 - l1 - l2;
        const double tol = -1e-12;
        if (l0 < tol || l1 < tol || l2 < tol) continue;
        if (mesh.order == 1) return l0 * nodal[c[0]] + l1 * nodal[c[1]] + l2 * nodal[c[2]];
        const double L[3] = {l0, l1, l2};
        cplx s = 0;
        for (int i = 0; i < 3; ++i) s += L[i] * (2 * L[i] - 1) * nodal[c[i]];
        s += 4 * l0 * l1 * nodal[c[3]] + 4 * l1 * l2 * nodal[c[4]] + 4 * l2 * l0 * nodal[c[5]];
        return s;
    }
    throw std::invalid_argument("interpolate: point outside the cell (reduce it to the cell first)");
}

int find_torus_node(const Mesh& mesh, const Vec2& x, Vec2* shift)
{
    TorusIndex index(mesh);
    const int t = index.find(x);
    if (t >= 0 && shift) *shift = x - mesh.nodes[mesh.torus_rep[t]];
    return t;
}

GroupAction compose(const GroupAction& a, const GroupAction& b)
{
    GroupAction c;
    c.linear = a.linear * b.linear;
    const std::size_t n = b.perm.size();
    c.perm.resize(n);
    c.shift.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const int s = b.perm[t];
        c.perm[t] = a.perm[s];
        c.shift[t] = a.shift[s] + a.linear * b.shift[t];
    }
    return c;
}

namespace {

void write_action(std::ostream& os, const char* name, const GroupAction& a)
{
    os << name << ' ' << a.perm.size() << ' ' << a.linear(0, 0) << ' ' << a.linear(0, 1) << ' ' << a.linear(1, 0)
       << ' ' << a.linear(1, 1) << '\n';
    for (std::size_t t = 0; t < a.perm.size(); ++t)
        os << t << ' ' << a.perm[t] << ' ' << a.shift[t].x() << ' ' << a.shift[t].y() << '\n';
}

GroupAction read_action(std::istream& is, const char* name)
{
    std::string tag;
    std::size_t n = 0;
    GroupAction a;
    is >> tag >> n >> a.linear(0, 0) >> a.linear(0, 1) >> a.linear(1, 0) >> a.linear(1, 1);
    if (tag != name) throw std::runtime_error("read_mesh: expected section " + std::string(name));
    a.perm.resize(n);
    a.shift.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t idx;
        is >> idx >> a.perm[t] >> a.shift[t].x() >> a.shift[t].y();
    }
    return a;
}

}  // namespace

void write_mesh(const Mesh& m, std::ostream& os)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "bfem-mesh 1\n";
    os << "order " << m.order << "\nrefine " << m.refine << "\nperiodic " << int(m.periodic) << "\nR0 " << m.geom.R0
       << "\nnseg " << m.geom.nseg << '\n';
    os << "basis " << m.basis.v1.x() << ' ' << m.basis.v1.y() << ' ' << m.basis.v2.x() << ' ' << m.basis.v2.y() << ' '
       << m.basis.origin.x() << ' ' << m.basis.origin.y() << '\n';
    os << "nodes " << m.nodes.size() << '\n';
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
        os << i << ' ' << m.nodes[i].x() << ' ' << m.nodes[i].y() << ' ' << m.torus_id[i] << ' '
           << int(m.on_cell_boundary[i]) << '\n';
    os << "elements " << m.num_elements() << ' ' << m.nodes_per_element << '\n';
    for (int e = 0; e < m.num_elements(); ++e) {
        os << e;
        for (int k = 0; k < m.nodes_per_element; ++k) os << ' ' << m.element(e)[k];
        os << ' ' << region_name(m.region[e]) << '\n';
    }
    os << "torus " << m.torus_rep.size() << '\n';
    for (std::size_t t = 0; t < m.torus_rep.size(); ++t) os << t << ' ' << m.torus_rep[t] << '\n';
    os << "pairs " << m.periodic_pairs.size() << '\n';
    for (const auto& p : m.periodic_pairs)
        os << p.node << ' ' << p.partner << ' ' << p.shift.x() << ' ' << p.shift.y() << '\n';
    write_action(os, "rotation", m.rot_action);
    write_action(os, "inversion", m.inv_action);
    os.flags(flags);
    os.precision(prec);
}

Mesh read_mesh(std::istream& is)
{
    Mesh m;
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "bfem-mesh" || version != 1) throw std::runtime_error("read_mesh: not a bfem-mesh v1 stream");
    auto expect = [&](const char* name) {
        is >> tag;
        if (tag != name) throw std::runtime_error("read_mesh: expected '" + std::string(name) + "', got '" + tag + "'");
    };
    int periodic = 1;
    expect("order");
    is >> m.order;
    expect("refine");
    is >> m.refine;
    expect("periodic");
    is >> periodic;
    m.periodic = periodic != 0;
    expect("R0");
    is >> m.geom.R0;
    expect("nseg");
    is >> m.geom.nseg;
    expect("basis");
    Vec2 v1, v2, o;
    is >> v1.x() >> v1.y() >> v2.x() >> v2.y() >> o.x() >> o.y();
    m.basis = LatticeBasis::from_vectors(v1, v2, o);
    std::size_t n = 0;
    expect("nodes");
    is >> n;
    m.nodes.resize(n);
    m.torus_id.resize(n);
    m.on_cell_boundary.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t idx;
        int bnd;
        is >> idx >> m.nodes[i].x() >> m.nodes[i].y() >> m.torus_id[i] >> bnd;
        m.on_cell_boundary[i] = static_cast<char>(bnd);
    }
    std::size_t ne = 0;
    expect("elements");
    is >> ne >> m.nodes_per_element;
    m.conn.resize(ne * m.nodes_per_element);
    m.region.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        std::size_t idx;
        is >> idx;
        for (int k = 0; k < m.nodes_per_element; ++k) is >> m.conn[e * m.nodes_per_element + k];
        is >> tag;
        if (tag == "inclusionA") m.region[e] = Region::InclusionA;
        else if (tag == "inclusionB") m.region[e] = Region::InclusionB;
        else if (tag == "bulk") m.region[e] = Region::Bulk;
        else throw std::runtime_error("read_mesh: unknown region tag " + tag);
    }
    expect("torus");
    is >> n;
    m.torus_rep.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t idx;
        is >> idx >> m.torus_rep[t];
    }
    expect("pairs");
    is >> n;
    m.periodic_pairs.resize(n);
    for (auto& p : m.periodic_pairs) is >> p.node >> p.partner >> p.shift.x() >> p.shift.y();
    m.rot_action = read_action(is, "rotation");
    m.inv_action = read_action(is, "inversion");
    if (!is) throw std::runtime_error("read_mesh: truncated stream");
    return m;
}

}  // namespace bfem
