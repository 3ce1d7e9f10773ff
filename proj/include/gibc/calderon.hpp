#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "gibc/assembly.hpp"
#include "gibc/linalg.hpp"

namespace gibc {

// Frequency-independent Galerkin pieces shared by every contour frequency.
struct SpaceOperators {
    GalerkinMatrix mass;
    GalerkinMatrix divmass;
    GalerkinMatrix pairing;
};
SpaceOperators build_space_operators(const RTSpace& space);

// 2x2 block Galerkin realization of the impedance-augmented Calderon system
// at one complex frequency:
//   A11 = -V(s) + Z(s),  A12 =  K(s) - P/2,
//   A21 = -K(s) - P/2,   A22 = -V(s),
// acting on stacked coefficient vectors (phi, psi).
struct BlockSystem {
    Complex s;
    ImpedanceKind kind;
    double delta;
    int n; // dof count per block

    Eigen::MatrixXcd single_layer;   // V(s)
    Eigen::MatrixXcd double_layer;   // K(s)
    Eigen::MatrixXcd impedance;      // Z(s)
    const Eigen::MatrixXcd* pairing; // borrowed from SpaceOperators

    Eigen::MatrixXcd block(int row, int col) const;
    Eigen::MatrixXcd dense() const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
};

BlockSystem build_system(const RTSpace& space, const SpaceOperators& ops, Complex s,
                         ImpedanceKind kind, double delta, const QuadratureConfig& quad,
                         int workers = 0);

struct SolveOptions {
    bool use_direct = false;
    double tol = 1e-8;
    int max_iter = 1000;
};

struct SolveStats {
    int iterations = 0;     // 0 for direct solves
    double residual = 0.0;
};

// GMRES on the assembled blocks (dense LU when use_direct). Non-convergence
// raises SolverError carrying the achieved residual.
Eigen::VectorXcd solve(const BlockSystem& system, const Eigen::VectorXcd& rhs,
                       const SolveOptions& opts = {}, SolveStats* stats = nullptr);

// Cached LU for repeated right-hand sides at one frequency.
class SystemSolver {
public:
    SystemSolver(const BlockSystem& system, const SolveOptions& opts);
    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs, SolveStats* stats = nullptr) const;

private:
    const BlockSystem& system_;
    SolveOptions opts_;
    std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
    std::optional<Eigen::MatrixXcd> dense_;
};

struct ConditionReport {
    double condition = 0.0;
    double norm = 0.0;
    double inverse_norm = 0.0;
};

// 2-norm condition data from the extreme singular values of the dense block
// matrix. Guarded by a size cap (dense factorization cost).
ConditionReport condition_report(const BlockSystem& system, int max_dofs = 3000);

} // namespace gibc
