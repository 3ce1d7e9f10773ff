#pragma once

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "gibc/kernel.hpp"
#include "gibc/quadrature.hpp"
#include "gibc/rt_space.hpp"

namespace gibc {

enum class OperatorTag { SingleLayer, DoubleLayer, Pairing, Mass, DivMass, Impedance };
enum class ImpedanceKind { ThinLayer, Absorbing };

struct GalerkinMatrix {
    Eigen::MatrixXcd matrix;
    Complex frequency{0.0, 0.0}; // zero for frequency-independent operators
    OperatorTag tag;
};

// Weak single layer through the antisymmetric pairing,
//   V_ij = -s Int G phi_i(x).phi_j(y) - s^-1 Int G div phi_i div phi_j,
// and weak double layer collapsed to
//   K_ij = Int grad_x G(s,x-y) . (phi_j(y) x phi_i(x)).
// Both are symmetric in i <-> j (swapping x and y flips grad G and the cross
// product). Panel pairs are routed to Sauter-Schwab or distance-graded Gauss
// rules; the coincident double-layer integrand vanishes on flat panels.
struct LayerOperators {
    GalerkinMatrix single_layer;
    GalerkinMatrix double_layer;
};
LayerOperators assemble_layer_operators(const RTSpace& space, Complex s,
                                        const QuadratureConfig& quad, int workers = 0);

GalerkinMatrix assemble_single_layer(const RTSpace& space, Complex s,
                                     const QuadratureConfig& quad, int workers = 0);
GalerkinMatrix assemble_double_layer(const RTSpace& space, Complex s,
                                     const QuadratureConfig& quad, int workers = 0);

// P_ij = Int (phi_i x nu).phi_j, exact degree-2 quadrature per panel.
GalerkinMatrix assemble_pairing(const RTSpace& space);

GalerkinMatrix assemble_mass(const RTSpace& space);
GalerkinMatrix assemble_divmass(const RTSpace& space);

// ThinLayer: delta s MASS + delta s^-1 DIVMASS; Absorbing: delta s^1/2 MASS
// (principal branch).
GalerkinMatrix assemble_impedance(const RTSpace& space, Complex s, ImpedanceKind kind,
                                  double delta);
GalerkinMatrix impedance_from_parts(const GalerkinMatrix& mass, const GalerkinMatrix& divmass,
                                    Complex s, ImpedanceKind kind, double delta);

// Local 3x3 blocks of one panel pair (row index = local edge of tx); exposed
// so tests can pit the production routing against brute-force rules.
struct PairBlocks {
    Eigen::Matrix3cd single_layer;
    Eigen::Matrix3cd double_layer;
};
PairBlocks layer_pair_blocks(const RTSpace& space, int tx, int ty, Complex s,
                             const PairRule& rule, const TriangleChart& chart_x,
                             const TriangleChart& chart_y);
PairBlocks routed_layer_pair_blocks(const RTSpace& space, int tx, int ty, Complex s,
                                    const QuadratureConfig& quad);

// Test/data functionals against the RT basis.
using TangentialField = std::function<Vec3c(const Vec3&)>;
using ScalarField = std::function<Complex(const Vec3&)>;

// b_i = Int phi_i . f
Eigen::VectorXcd project_tangential(const RTSpace& space, const TangentialField& f,
                                    int order = 6);
// b_i = Int (phi_i x nu) . f
Eigen::VectorXcd pairing_functional(const RTSpace& space, const TangentialField& f,
                                    int order = 6);
// b_i = Int div phi_i * g
Eigen::VectorXcd divergence_functional(const RTSpace& space, const ScalarField& g,
                                       int order = 6);

} // namespace gibc
