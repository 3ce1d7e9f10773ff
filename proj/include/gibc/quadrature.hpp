#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gibc/mesh.hpp"

namespace gibc {

struct Gauss1D {
    std::vector<double> nodes;   // on [0,1]
    std::vector<double> weights;
};

// Gauss-Legendre rule on [0,1], exact for polynomials of degree 2n-1.
Gauss1D gauss_legendre_01(int n);

// Gauss rule for the weight function t on [0,1] (Jacobi (0,1) on [-1,1]
// mapped); exact for \int_0^1 t p(t) dt with deg p <= 2n-1.
Gauss1D gauss_jacobi_01_weight_t(int n);

// Affine chart of a flat panel over the reference simplex
// That = {(u,v): 0 <= v <= u <= 1}: x(u,v) = p0 + u (p1-p0) + v (p2-p1).
// The surface Jacobian is constant and equals twice the triangle area.
struct TriangleChart {
    Vec3 p0, leg1, leg2;
    double jacobian; // |leg1 x leg2| = 2 * area

    TriangleChart() : p0(Vec3::Zero()), leg1(Vec3::Zero()), leg2(Vec3::Zero()), jacobian(0) {}
    TriangleChart(const Vec3& a, const Vec3& b, const Vec3& c)
        : p0(a), leg1(b - a), leg2(c - b), jacobian(leg1.cross(leg2).norm()) {}

    Vec3 map(double u, double v) const { return p0 + u * leg1 + v * leg2; }
};

struct TrianglePoint {
    double u, v, w; // simplex coordinates and weight; sum of w equals 1/2
};
using TriangleRule = std::vector<TrianglePoint>;

// Duffy-collapsed tensor rule on the reference simplex: Gauss-Jacobi in the
// radial direction absorbs the collapse Jacobian, so n*n points integrate
// total degree 2n-1 exactly. Cached per order.
const TriangleRule& triangle_rule(int n);

// Plain 1D-Gauss tensor rule on the collapsed square with the Jacobian folded
// into the weights (n=8 gives the 64-point rule used as a brute-force
// reference in tests).
TriangleRule tensor_gauss_triangle(int n);

// One 4D quadrature point for a panel-pair integral in relative coordinates.
struct PairPoint {
    double ux, vx, uy, vy, w;
};
using PairRule = std::vector<PairPoint>;

enum class PairCase { Separated, SharedVertex, SharedEdge, Coincident };

// Sauter-Schwab regularizing transforms for touching panel pairs, built on a
// tensor Gauss-Legendre grid of order n per direction on [0,1]^4. The charts
// of both panels must list the shared vertices first: identical order for
// Coincident, the common edge as (p0, p1) of both charts for SharedEdge, and
// the common vertex as p0 of both charts for SharedVertex. Weights of each
// rule sum to 1/4 = area(That)^2. Cached per (case, n).
const PairRule& sauter_schwab_rule(PairCase c, int n);

// Tensor product of two triangle rules for separated pairs.
PairRule separated_pair_rule(int n);

// Classifies a pair of triangles of one mesh and produces charts with the
// vertex ordering the singular rules require.
struct PairGeometry {
    PairCase kind;
    TriangleChart chart_x, chart_y;
    double distance;  // min vertex-vertex distance (0 when touching)
    double diameter;  // max of the two panel diameters
};
PairGeometry classify_pair(const TriangleSurfaceMesh& mesh, int tx, int ty);

// Panel-pair quadrature policy: Sauter-Schwab orders for touching pairs and
// distance-graded Gauss orders for the rest. The near-field threshold is the
// distance/diameter ratio below which the strongest regular rule fires.
struct QuadratureConfig {
    int regular_order = 4;   // far-field 1D order (degree 2n-1)
    int singular_order = 4;  // Sauter-Schwab 1D order
    double near_threshold = 2.0;

    int order_for_ratio(double ratio) const;
};

} // namespace gibc
