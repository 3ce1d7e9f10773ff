#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gibc/kernel.hpp"

namespace gibc {

// Coefficients of an implicit Runge-Kutta method. The convolution quadrature
// engine requires an invertible A; Radau IIA additionally gives stiff
// accuracy (last row of A equals b, c_m = 1) and R(infinity) = 0, which the
// node-value extraction relies on.
struct ButcherTableau {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    int stages = 0;

    double r_infinity() const; // 1 - b^T A^{-1} 1
    bool stiffly_accurate(double tol = 1e-14) const;
};

// Radau IIA with m in {1,2,3} (orders 1, 3, 5).
ButcherTableau radau_tableau(int m);

// Runge-Kutta differentiation symbol Delta(zeta) = (A + zeta/(1-zeta) 1 b^T)^{-1},
// defined for |zeta| < 1.
Eigen::MatrixXcd delta_symbol(Complex zeta, const ButcherTableau& tableau);

// Contour data for the all-steps-at-once convolution quadrature: L = N+1
// sample points zeta_l = rho * exp(-2 pi i l / L) with rho^N = sqrt(eps),
// and the eigendecomposition of Delta(zeta_l)/tau per l. All eigenvalues
// have positive real part. The decomposition is computed and stored in
// extended precision: the inverse transform scales by rho^{-n} (up to
// 1/sqrt(eps)), which would amplify double-level defects of T T^{-1} = I
// into the output.
struct CQContext {
    ButcherTableau tableau;
    int steps = 0;       // N
    double final_time = 0.0;
    double step = 0.0;   // tau
    int length = 0;      // L = N + 1
    double rho = 0.0;

    using MatrixLD = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    struct FrequencyData {
        Eigen::VectorXcd eigenvalues;   // m scalar frequencies, Re > 0
        MatrixLD eigenvectors;          // T
        MatrixLD eigenvectors_inv;      // T^{-1}
    };
    std::vector<FrequencyData> frequencies; // size L

    int canonical_count() const { return length / 2 + 1; }
    int mirror_index(int l) const { return (length - l) % length; }
    double min_frequency_real_part() const;
    double stage_time(int n, int i) const { return step * n + tableau.c(i) * step; }
    double node_time(int n) const { return step * n; }
};

CQContext build_context(const ButcherTableau& tableau, int steps, double final_time);

// Time series of Runge-Kutta stage vectors: entry (n, i) holds the payload at
// stage time t_n + c_i tau, n = 0..N.
template <typename Real>
class StageSeriesT {
public:
    using Scalar = std::complex<Real>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    StageSeriesT() = default;
    StageSeriesT(int steps, int stages, int dim)
        : steps_(steps), stages_(stages), dim_(dim),
          data_(static_cast<std::size_t>(steps + 1) * stages, Vector::Zero(dim)) {}

    int steps() const { return steps_; }
    int stages() const { return stages_; }
    int dim() const { return dim_; }
    Vector& at(int n, int i) { return data_[idx(n, i)]; }
    const Vector& at(int n, int i) const { return data_[idx(n, i)]; }

    double max_abs() const {
        Real v = 0;
        for (const auto& x : data_)
            for (Eigen::Index c = 0; c < x.size(); ++c) v = std::max(v, std::abs(x(c)));
        return static_cast<double>(v);
    }
    double max_imag_abs() const {
        Real v = 0;
        for (const auto& x : data_)
            for (Eigen::Index c = 0; c < x.size(); ++c) v = std::max(v, std::abs(x(c).imag()));
        return static_cast<double>(v);
    }

private:
    std::size_t idx(int n, int i) const { return static_cast<std::size_t>(n) * stages_ + i; }
    int steps_ = 0, stages_ = 0, dim_ = 0;
    std::vector<Vector> data_;
};

using StageSeries = StageSeriesT<double>;
using StageSeriesLD = StageSeriesT<long double>;
using ComplexLD = std::complex<long double>;

// Samples a scalar function at all stage times into a dim-1 series.
StageSeries sample_scalar(const CQContext& ctx, const std::function<double(double)>& g);
StageSeriesLD sample_scalar_ld(const CQContext& ctx, const std::function<double(double)>& g);

// Scheme output at the nodes t_0..t_N: zero at t_0, afterwards the m-th stage
// component of index n-1 (stiff accuracy, c_m = 1).
template <typename Real>
std::vector<typename StageSeriesT<Real>::Vector> node_values(const StageSeriesT<Real>& series) {
    std::vector<typename StageSeriesT<Real>::Vector> out(
        series.steps() + 1, StageSeriesT<Real>::Vector::Zero(series.dim()));
    for (int n = 1; n <= series.steps(); ++n) out[n] = series.at(n - 1, series.stages() - 1);
    return out;
}

// Linear map applied at one contour eigen-frequency. For cq_apply it realizes
// K(s) v; for cq_solve it solves A(s) x = v. It must commute with complex
// conjugation (operators with real-coefficient kernels do).
using FrequencyOp =
    std::function<Eigen::VectorXcd(Complex s, const Eigen::VectorXcd&)>;
using FrequencyOpLD =
    std::function<StageSeriesLD::Vector(ComplexLD s, const StageSeriesLD::Vector&)>;

struct CQOptions {
    // Process only l <= L/2 and mirror the rest by conjugation; valid for
    // real input data and conjugation-commuting operators.
    bool conjugate_symmetry = true;
    int workers = 0;        // parallelism of the frequency loop
    int output_dim = -1;    // defaults to the input dimension
};

// Discrete convolution K(d/dt^tau) via scaled DFT, per-frequency application
// in the Delta eigenbasis, and scaled inverse DFT. The transform pipeline
// runs in extended precision throughout (the rho^{-n} inverse scaling reaches
// 1/sqrt(eps)); the double variants round only at the operator boundary.
StageSeries cq_apply(const CQContext& ctx, const FrequencyOp& transfer,
                     const StageSeries& input, const CQOptions& opts = {});

// Same transform structure with per-frequency solves; by the discrete
// composition rule this inverts cq_apply of the same family.
StageSeries cq_solve(const CQContext& ctx, const FrequencyOp& solver,
                     const StageSeries& rhs, const CQOptions& opts = {});

// Extended-precision variants for scalar transfer chains, where the
// sqrt(eps)-level floor of the double operator boundary would dominate.
StageSeriesLD cq_apply_ld(const CQContext& ctx, const FrequencyOpLD& transfer,
                          const StageSeriesLD& input, const CQOptions& opts = {});
StageSeriesLD cq_solve_ld(const CQContext& ctx, const FrequencyOpLD& solver,
                          const StageSeriesLD& rhs, const CQOptions& opts = {});

// Exact-weight scalar convolution quadrature in extended precision: weights
// from a wide extraction contour, convolved directly. The all-steps contour
// evaluator above carries a sqrt(eps)-level floor (its rho is tied to the
// step count); this path resolves discretization errors far below that and
// backs the convergence-order oracles. Cost O(N^2), scalar payloads only.
// Returns the scheme values at the nodes t_0..t_N.
std::vector<double> scalar_cq_node_values(const ButcherTableau& tableau, int steps,
                                          double final_time,
                                          const std::function<ComplexLD(ComplexLD)>& transfer,
                                          const std::function<double(double)>& g);

} // namespace gibc
