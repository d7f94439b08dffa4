#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bfem/lattice.hpp"

namespace bfem {

enum class Region : int { InclusionA = 0, InclusionB = 1, Bulk = 2 };

const char* region_name(Region r);

// Two discs of radius R0 centred at v_A and v_B. The circles are inscribed
// regular polygons; `nseg` is the polygon resolution at refine level 2 and
// doubles with every further level (halves below), so the boundary error
// shrinks together with the element size.
struct CellGeometry {
    double R0 = 0.2;
    int nseg = 96;

    int segments_at(int refine) const;
    void validate(int refine) const;  // throws std::invalid_argument naming the constraint
};

// Permutation of torus nodes with lattice shifts:
// map(position(rep(t))) = position(rep(perm[t])) + shift[t].
struct GroupAction {
    Mat2 linear = Mat2::Identity();  // linear part of the affine map
    std::vector<int> perm;
    std::vector<Vec2> shift;
};

struct PeriodicPair {
    int node = -1;
    int partner = -1;
    Vec2 shift;  // position(partner) = position(node) + shift
};

struct Mesh {
    int order = 2;
    int refine = 0;
    bool periodic = true;
    CellGeometry geom;
    LatticeBasis basis = LatticeBasis::honeycomb();
    PointGroupData group = PointGroupData::honeycomb();

    std::vector<Vec2> nodes;
    int nodes_per_element = 6;   // 3 (order 1) or 6 (order 2: v0 v1 v2 m01 m12 m20)
    std::vector<int> conn;       // element-major
    std::vector<Region> region;  // per element

    // Periodic identification: nodes sharing a torus id are the same point of R^2 / Lambda.
    std::vector<int> torus_id;   // per node
    std::vector<int> torus_rep;  // per torus node: representative node
    std::vector<PeriodicPair> periodic_pairs;
    std::vector<char> on_cell_boundary;  // per node

    GroupAction rot_action;  // x -> x_c + R^T (x - x_c)
    GroupAction inv_action;  // x -> 2 x_c - x

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(region.size()); }
    int num_torus_nodes() const { return static_cast<int>(torus_rep.size()); }
    const int* element(int e) const { return conn.data() + static_cast<std::size_t>(e) * nodes_per_element; }

    double element_area(int e) const;
    double region_area(Region r) const;
    double total_area() const;
    double max_element_diameter() const;
};

Mesh build_mesh(const CellGeometry& geom, int refine, int order);

// Unit square [0,1]^2 without inclusions or periodicity, for boundary-value checks.
Mesh build_square_mesh(int n, int order);

// Exact area of the inscribed polygon approximating one inclusion at a refine level.
double inscribed_polygon_area(double R0, int nseg);

// Throws std::invalid_argument if x lies outside every element.
cplx interpolate(const Mesh& mesh, const std::vector<cplx>& nodal, const Vec2& x);

// Torus-node lookup for a point of R^2 (any lattice translate); -1 if absent.
int find_torus_node(const Mesh& mesh, const Vec2& x, Vec2* shift = nullptr);

GroupAction compose(const GroupAction& a, const GroupAction& b);  // apply b first, then a

void write_mesh(const Mesh& mesh, std::ostream& os);
Mesh read_mesh(std::istream& is);

}  // namespace bfem
