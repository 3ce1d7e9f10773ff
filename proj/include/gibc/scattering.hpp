#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gibc/calderon.hpp"
#include "gibc/cq.hpp"

namespace gibc {

// Gaussian-modulated plane wave solving Maxwell's equations on free space:
//   E(t,x) = a f(t - x3 + t0) e1,  H(t,x) = a f(t - x3 + t0) e2,
// with f(u) = exp(-rate u^2). The packet plane sits at x3 = t0 at time zero
// and travels in +x3 with unit speed, so it impinges on scatterers near the
// origin for t0 < 0. curl H = a f' e1, hence div_G(H x nu) = -nu_1 a f'.
struct IncidentWave {
    double rate = 50.0;
    double offset = -2.0; // t0
    double amplitude = 1.0;

    double profile(double u) const { return amplitude * std::exp(-rate * u * u); }
    double profile_deriv(double u) const { return -2.0 * rate * u * profile(u); }
    double phase(double t, const Vec3& x) const { return t - x.z() + offset; }

    Vec3 efield(double t, const Vec3& x) const {
        return Vec3(profile(phase(t, x)), 0.0, 0.0);
    }
    Vec3 hfield(double t, const Vec3& x) const {
        return Vec3(0.0, profile(phase(t, x)), 0.0);
    }
    Vec3 curl_hfield(double t, const Vec3& x) const {
        return Vec3(profile_deriv(phase(t, x)), 0.0, 0.0);
    }
};

// Stage-time series of the boundary data functionals:
//   e_tangential_i = (phi_i, E^inc)_Gamma
//   h_rotated_i    = (phi_i, H^inc x nu)_Gamma
//   h_rotated_div_i= (div phi_i, div_Gamma(H^inc x nu))_Gamma
struct IncidentTraces {
    StageSeries e_tangential;
    StageSeries h_rotated;
    StageSeries h_rotated_div;

    StageSeries stacked() const; // dim 3n, blocks in the order above
};

IncidentTraces incident_traces(const IncidentWave& wave, const RTSpace& space,
                               const CQContext& ctx, int quad_order = 4);

// Frequency-domain right-hand side of the block system from transformed trace
// data: g(s) = -(E-data + Z(s) applied weakly to the H-data), zero second
// block.
Eigen::VectorXcd rhs_at_frequency(Complex s, const Eigen::VectorXcd& e_data,
                                  const Eigen::VectorXcd& h_data,
                                  const Eigen::VectorXcd& h_div_data,
                                  ImpedanceKind kind, double delta);

struct BoundaryDensities {
    StageSeries phi; // gamma_T H coefficients
    StageSeries psi; // -gamma_T E coefficients
    double imag_residue = 0.0; // max |Im| before taking real parts
};

struct ScatteringSolveOptions {
    SolveOptions solver;
    int workers = 0;
    // Above this dof count frequencies run serially and assembly parallelizes
    // inside each frequency (keeps one dense workspace live at a time).
    int frequency_parallel_dof_cap = 800;
};

// Per-frequency Galerkin solves of the impedance-augmented Calderon system on
// the contour, inverse-transformed to stage time series (real parts taken).
BoundaryDensities solve_densities(const RTSpace& space, const SpaceOperators& ops,
                                  const CQContext& ctx, const IncidentWave& wave,
                                  ImpedanceKind kind, double delta,
                                  const QuadratureConfig& quad,
                                  const ScatteringSolveOptions& opts = {});

// Evaluates the discrete single/double layer potentials of RT0 densities at
// exterior points (regular quadrature; integrands smooth off Gamma).
class PotentialEvaluator {
public:
    PotentialEvaluator(const RTSpace& space, int quad_order = 4);

    struct Potentials {
        Vec3c single_layer; // S(s) applied to the density, at one point
        Vec3c double_layer; // D(s) likewise
    };
    Potentials evaluate(Complex s, const Eigen::VectorXcd& coeffs, const Vec3& point) const;

    // E = -S phi + D psi, H = -D phi - S psi for all points, stacked
    // (E_1,H_1,E_2,H_2,...) as a 6p vector.
    Eigen::VectorXcd fields_at(Complex s, const Eigen::VectorXcd& phi,
                               const Eigen::VectorXcd& psi,
                               const std::vector<Vec3>& points) const;

private:
    struct QuadPoint {
        Vec3 y;
        double w; // weight including the panel Jacobian
        Vec3 basis[3];
        double div[3];
        int edge[3];
    };
    std::vector<QuadPoint> qps_;
};

struct FieldObservation {
    std::vector<Vec3> points;
    std::vector<double> distances; // to Gamma
    // node-time values t_0..t_N (zero at t_0)
    std::vector<std::vector<Vec3>> efield; // [n][point]
    std::vector<std::vector<Vec3>> hfield;
    double imag_residue = 0.0;
};

// Time-discretized representation formulas at exterior points. Points closer
// to Gamma than 0.1 h are rejected.
FieldObservation evaluate_fields(const RTSpace& space, const CQContext& ctx,
                                 const BoundaryDensities& densities,
                                 const std::vector<Vec3>& points, int quad_order = 4,
                                 int workers = 0);

// Distance from a point to the triangulated surface.
double distance_to_mesh(const TriangleSurfaceMesh& mesh, const Vec3& point);

} // namespace gibc
