#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using cplx = std::complex<double>;
using CVec2 = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;

struct LatticeBasis {
    Vec2 v1, v2;
    Vec2 k1, k2;
    Vec2 origin;  // anchor of the half-open fundamental parallelogram

    static LatticeBasis honeycomb();
    static LatticeBasis from_vectors(const Vec2& v1, const Vec2& v2, const Vec2& origin);

    double cell_area() const;
    // coordinates (t1, t2) with x = origin + t1 v1 + t2 v2
    Vec2 cell_coords(const Vec2& x) const;
    Vec2 from_cell_coords(const Vec2& t) const;
    Vec2 lattice_vector(long n1, long n2) const { return double(n1) * v1 + double(n2) * v2; }
};

struct PointGroupData {
    Mat2 R;    // clockwise rotation by 2 pi / 3
    cplx tau;  // exp(2 pi i / 3)
    CVec2 xi;  // R xi = tau xi, |xi| = 1
    Vec2 x_c;  // rotation / inversion centre
    Vec2 v_A, v_B;

    static PointGroupData honeycomb();
};

// Returns (k1, k2) with k_l . v_m = 2 pi delta_lm. Throws on a degenerate basis.
std::pair<Vec2, Vec2> dual_basis(const Vec2& v1, const Vec2& v2);

// K = (k1 - k2) / 3 and K' = -K.
std::pair<Vec2, Vec2> vertex_points(const LatticeBasis& b);

struct CellReduction {
    Vec2 x0;       // representative in the half-open cell
    Vec2 shift;    // lattice vector, x = x0 + shift
    long n1 = 0, n2 = 0;
};

CellReduction reduce_to_cell(const Vec2& x, const LatticeBasis& b);

struct KPoint {
    std::string label;
    Vec2 k;
};

struct KPath {
    std::vector<KPoint> waypoints;
    int samples_per_segment = 1;

    struct Sample {
        Vec2 k;
        double arclength;
    };
    std::vector<Sample> samples() const;
    std::size_t sample_count() const;
};

// M = k1/2, Gamma = 0, K, M
KPath kpath_MGKM(int samples, const LatticeBasis& b = LatticeBasis::honeycomb());

}  // namespace bfem
