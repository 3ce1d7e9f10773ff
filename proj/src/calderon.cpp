#include "gibc/calderon.hpp"

#include <limits>
#include <string>

#include <Eigen/LU>

#include "gibc/errors.hpp"

namespace gibc {

SpaceOperators build_space_operators(const RTSpace& space) {
    return {assemble_mass(space), assemble_divmass(space), assemble_pairing(space)};
}

Eigen::MatrixXcd BlockSystem::block(int row, int col) const {
    if (row == 0 && col == 0) return -single_layer + impedance;
    if (row == 0 && col == 1) return double_layer - 0.5 * (*pairing);
    if (row == 1 && col == 0) return -double_layer - 0.5 * (*pairing);
    if (row == 1 && col == 1) return -single_layer;
    throw DomainError("BlockSystem::block: index out of range");
}

Eigen::MatrixXcd BlockSystem::dense() const {
    Eigen::MatrixXcd full(2 * n, 2 * n);
    full.topLeftCorner(n, n) = -single_layer + impedance;
    full.topRightCorner(n, n) = double_layer - 0.5 * (*pairing);
    full.bottomLeftCorner(n, n) = -double_layer - 0.5 * (*pairing);
    full.bottomRightCorner(n, n) = -single_layer;
    return full;
}

Eigen::VectorXcd BlockSystem::apply(const Eigen::VectorXcd& x) const {
    const auto phi = x.head(n);
    const auto psi = x.tail(n);
    Eigen::VectorXcd out(2 * n);
    const Eigen::VectorXcd pair_phi = (*pairing) * phi;
    const Eigen::VectorXcd pair_psi = (*pairing) * psi;
    out.head(n) = -(single_layer * phi) + impedance * phi + double_layer * psi - 0.5 * pair_psi;
    out.tail(n) = -(double_layer * phi) - 0.5 * pair_phi - single_layer * psi;
    return out;
}

BlockSystem build_system(const RTSpace& space, const SpaceOperators& ops, Complex s,
                         ImpedanceKind kind, double delta, const QuadratureConfig& quad,
                         int workers) {
    if (!(s.real() > 0.0)) throw DomainError("build_system: Re s must be positive");
    LayerOperators layers = assemble_layer_operators(space, s, quad, workers);
    BlockSystem sys;
    sys.s = s;
    sys.kind = kind;
    sys.delta = delta;
    sys.n = space.dof_count();
    sys.single_layer = std::move(layers.single_layer.matrix);
    sys.double_layer = std::move(layers.double_layer.matrix);
    sys.impedance = impedance_from_parts(ops.mass, ops.divmass, s, kind, delta).matrix;
    sys.pairing = &ops.pairing.matrix;
    return sys;
}

SystemSolver::SystemSolver(const BlockSystem& system, const SolveOptions& opts)
    : system_(system), opts_(opts) {
    if (opts_.use_direct) {
        dense_ = system.dense();
        lu_.emplace(*dense_);
    }
}

Eigen::VectorXcd SystemSolver::solve(const Eigen::VectorXcd& rhs, SolveStats* stats) const {
    if (rhs.size() != 2 * system_.n) throw DomainError("solve: rhs dimension mismatch");
    if (!rhs.allFinite()) throw DomainError("solve: rhs has non-finite entries");
    if (rhs.norm() == 0.0) {
        if (stats) *stats = {0, 0.0};
        return Eigen::VectorXcd::Zero(rhs.size());
    }
    if (opts_.use_direct) {
        Eigen::VectorXcd x = lu_->solve(rhs);
        if (stats) *stats = {0, (*dense_ * x - rhs).norm() / rhs.norm()};
        return x;
    }
    if (!(opts_.tol > 0.0) || opts_.tol > 1e-2)
        throw DomainError("solve: GMRES tolerance must lie in (0, 1e-2]");
    GmresResult res = gmres([this](const Eigen::VectorXcd& v) { return system_.apply(v); },
                            rhs, opts_.tol, opts_.max_iter);
    if (!res.converged)
        throw SolverError("solve: GMRES stalled at relative residual " +
                              std::to_string(res.residual),
                          res.residual, res.iterations);
    if (stats) *stats = {res.iterations, res.residual};
    return res.solution;
}

Eigen::VectorXcd solve(const BlockSystem& system, const Eigen::VectorXcd& rhs,
                       const SolveOptions& opts, SolveStats* stats) {
    return SystemSolver(system, opts).solve(rhs, stats);
}

ConditionReport condition_report(const BlockSystem& system, int max_dofs) {
    if (system.n > max_dofs)
        throw ResourceError("condition_report: " + std::to_string(system.n) +
                            " dofs exceed the dense cap of " + std::to_string(max_dofs));
    const Eigen::MatrixXcd full = system.dense();
    const ExtremeSingularValues sv = extreme_singular_values(full);
    ConditionReport rep;
    rep.norm = sv.sigma_max;
    rep.inverse_norm = sv.sigma_min > 0 ? 1.0 / sv.sigma_min : std::numeric_limits<double>::infinity();
    rep.condition = rep.norm * rep.inverse_norm;
    return rep;
}

} // namespace gibc
