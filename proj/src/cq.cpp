#include "gibc/cq.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "gibc/dft.hpp"
#include "gibc/errors.hpp"
#include "gibc/parallel.hpp"

namespace gibc {

double ButcherTableau::r_infinity() const {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(stages);
    return 1.0 - b.dot(A.partialPivLu().solve(ones));
}

bool ButcherTableau::stiffly_accurate(double tol) const {
    return (A.row(stages - 1).transpose() - b).norm() <= tol &&
           std::abs(c(stages - 1) - 1.0) <= tol;
}

ButcherTableau radau_tableau(int m) {
    ButcherTableau t;
    t.stages = m;
    switch (m) {
        case 1:
            t.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
            t.b = Eigen::VectorXd::Constant(1, 1.0);
            t.c = Eigen::VectorXd::Constant(1, 1.0);
            break;
        case 2:
            t.A.resize(2, 2);
            t.A << 5.0 / 12.0, -1.0 / 12.0,
                   3.0 / 4.0,   1.0 / 4.0;
            t.b.resize(2);
            t.b << 3.0 / 4.0, 1.0 / 4.0;
            t.c.resize(2);
            t.c << 1.0 / 3.0, 1.0;
            break;
        case 3: {
            const double r6 = std::sqrt(6.0);
            t.A.resize(3, 3);
            t.A << (88.0 - 7.0 * r6) / 360.0, (296.0 - 169.0 * r6) / 1800.0, (-2.0 + 3.0 * r6) / 225.0,
                   (296.0 + 169.0 * r6) / 1800.0, (88.0 + 7.0 * r6) / 360.0, (-2.0 - 3.0 * r6) / 225.0,
                   (16.0 - r6) / 36.0, (16.0 + r6) / 36.0, 1.0 / 9.0;
            t.b.resize(3);
            t.b << (16.0 - r6) / 36.0, (16.0 + r6) / 36.0, 1.0 / 9.0;
            t.c.resize(3);
            t.c << (4.0 - r6) / 10.0, (4.0 + r6) / 10.0, 1.0;
            break;
        }
        default:
            throw DomainError("radau_tableau: supported stage counts are 1, 2, 3");
    }
    return t;
}

Eigen::MatrixXcd delta_symbol(Complex zeta, const ButcherTableau& tableau) {
    if (!(std::abs(zeta) < 1.0))
        throw DomainError("delta_symbol: |zeta| must be below 1");
    const int m = tableau.stages;
    Eigen::MatrixXcd inner = tableau.A.cast<Complex>();
    const Complex factor = zeta / (1.0 - zeta);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) inner(i, j) += factor * tableau.b(j);
    return inner.partialPivLu().inverse();
}

double CQContext::min_frequency_real_part() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& f : frequencies)
        for (int k = 0; k < f.eigenvalues.size(); ++k)
            lo = std::min(lo, f.eigenvalues(k).real());
    return lo;
}

CQContext build_context(const ButcherTableau& tableau, int steps, double final_time) {
    if (steps < 1) throw DomainError("build_context: need at least one step");
    if (!(final_time > 0.0)) throw DomainError("build_context: final time must be positive");

    CQContext ctx;
    ctx.tableau = tableau;
    ctx.steps = steps;
    ctx.final_time = final_time;
    ctx.step = final_time / steps;
    ctx.length = steps + 1;
    const double eps = std::numeric_limits<double>::epsilon();
    ctx.rho = std::pow(eps, 1.0 / (2.0 * steps));
    ctx.frequencies.resize(ctx.length);

    using MatLD = CQContext::MatrixLD;
    using VecLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, 1>;
    const long double pi_ld = 3.14159265358979323846264338327950288L;
    const int m = tableau.stages;

    MatLD a_ld(m, m);
    VecLD b_ld(m);
    for (int i = 0; i < m; ++i) {
        b_ld(i) = static_cast<long double>(tableau.b(i));
        for (int j = 0; j < m; ++j) a_ld(i, j) = static_cast<long double>(tableau.A(i, j));
    }

    for (int l = 0; l < ctx.length; ++l) {
        const long double angle = -2.0L * pi_ld * l / ctx.length;
        const ComplexLD zeta =
            static_cast<long double>(ctx.rho) * ComplexLD(std::cos(angle), std::sin(angle));
        if (!(std::abs(zeta) < 1.0L))
            throw DomainError("build_context: contour radius must stay below 1");
        MatLD inner = a_ld;
        const ComplexLD factor = zeta / (ComplexLD(1.0L, 0.0L) - zeta);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) inner(i, j) += factor * b_ld(j);
        const MatLD delta = inner.inverse() / static_cast<long double>(ctx.step);

        Eigen::ComplexEigenSolver<MatLD> es(delta);
        if (es.info() != Eigen::Success)
            throw NumericalError("build_context: eigendecomposition failed at l=" +
                                 std::to_string(l));
        CQContext::FrequencyData fd;
        fd.eigenvectors = es.eigenvectors();
        fd.eigenvalues.resize(m);
        for (int k = 0; k < m; ++k)
            fd.eigenvalues(k) = Complex(static_cast<double>(es.eigenvalues()(k).real()),
                                        static_cast<double>(es.eigenvalues()(k).imag()));

        Eigen::JacobiSVD<MatLD> svd(fd.eigenvectors);
        const double cond = static_cast<double>(svd.singularValues()(0) /
                                                svd.singularValues()(m - 1));
        if (!(cond < 1e12))
            throw NumericalError(
                "build_context: defective differentiation symbol (eigenvector condition " +
                std::to_string(cond) + ") at l=" + std::to_string(l));
        fd.eigenvectors_inv = fd.eigenvectors.inverse();

        const MatLD recon =
            fd.eigenvectors * es.eigenvalues().asDiagonal() * fd.eigenvectors_inv;
        if (!((recon - delta).norm() <= 1e-10L * delta.norm()))
            throw NumericalError("build_context: eigendecomposition reconstruction failed");

        for (int k = 0; k < m; ++k)
            if (!(fd.eigenvalues(k).real() > 0.0))
                throw NumericalError("build_context: contour frequency with Re s <= 0");
        ctx.frequencies[l] = std::move(fd);
    }
    return ctx;
}

StageSeries sample_scalar(const CQContext& ctx, const std::function<double(double)>& g) {
    StageSeries s(ctx.steps, ctx.tableau.stages, 1);
    for (int n = 0; n <= ctx.steps; ++n)
        for (int i = 0; i < ctx.tableau.stages; ++i)
            s.at(n, i)(0) = g(ctx.stage_time(n, i));
    return s;
}

StageSeriesLD sample_scalar_ld(const CQContext& ctx, const std::function<double(double)>& g) {
    StageSeriesLD s(ctx.steps, ctx.tableau.stages, 1);
    for (int n = 0; n <= ctx.steps; ++n)
        for (int i = 0; i < ctx.tableau.stages; ++i)
            s.at(n, i)(0) = static_cast<long double>(g(ctx.stage_time(n, i)));
    return s;
}

namespace {

// Frequency-domain stage data at one contour index: column i belongs to
// stage i. The transform pipeline runs in extended precision end to end;
// the inverse transform multiplies by rho^{-n} (up to 1/sqrt(eps)), which
// would otherwise amplify every double rounding committed between the
// transforms. Operator calls run at the precision of the series type.
using FreqBlock = Eigen::Matrix<ComplexLD, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
std::vector<FreqBlock> scaled_forward_dft(const StageSeriesT<Real>& input,
                                          const CQContext& ctx) {
    const int L = ctx.length;
    const int m = input.stages();
    const int d = input.dim();
    std::vector<FreqBlock> freq(L, FreqBlock(d, m));

    std::vector<long double> rho_pow(L);
    rho_pow[0] = 1.0L;
    for (int n = 1; n < L; ++n)
        rho_pow[n] = rho_pow[n - 1] * static_cast<long double>(ctx.rho);

    std::vector<ComplexLD> line(L);
    for (int i = 0; i < m; ++i) {
        for (int c = 0; c < d; ++c) {
            for (int n = 0; n < L; ++n) {
                const auto v = input.at(n, i)(c);
                line[n] = ComplexLD(static_cast<long double>(v.real()),
                                    static_cast<long double>(v.imag())) *
                          rho_pow[n];
            }
            dft_ld(line, -1);
            for (int l = 0; l < L; ++l) freq[l](c, i) = line[l];
        }
    }
    return freq;
}

template <typename Real>
StageSeriesT<Real> scaled_inverse_dft(const std::vector<FreqBlock>& freq, const CQContext& ctx,
                                      int dout) {
    const int L = ctx.length;
    const int m = ctx.tableau.stages;
    StageSeriesT<Real> out(ctx.steps, m, dout);

    std::vector<long double> rho_neg(L);
    rho_neg[0] = 1.0L;
    const long double inv_rho = 1.0L / static_cast<long double>(ctx.rho);
    for (int n = 1; n < L; ++n) rho_neg[n] = rho_neg[n - 1] * inv_rho;
    const long double invL = 1.0L / static_cast<long double>(L);

    std::vector<ComplexLD> line(L);
    for (int i = 0; i < m; ++i) {
        for (int c = 0; c < dout; ++c) {
            for (int l = 0; l < L; ++l) line[l] = freq[l](c, i);
            dft_ld(line, +1);
            for (int n = 0; n < L; ++n) {
                const ComplexLD v = line[n] * rho_neg[n] * invL;
                out.at(n, i)(c) = std::complex<Real>(static_cast<Real>(v.real()),
                                                     static_cast<Real>(v.imag()));
            }
        }
    }
    return out;
}

template <typename Real, typename Op>
StageSeriesT<Real> cq_transform(const CQContext& ctx, const Op& op,
                                const StageSeriesT<Real>& input, const CQOptions& opts,
                                const char* role) {
    if (input.steps() != ctx.steps || input.stages() != ctx.tableau.stages)
        throw DomainError(std::string(role) + ": series shape does not match the context");
    using Scalar = std::complex<Real>;
    using Vector = typename StageSeriesT<Real>::Vector;
    const int m = ctx.tableau.stages;
    const int dout = opts.output_dim > 0 ? opts.output_dim : input.dim();
    const int din = input.dim();

    std::vector<FreqBlock> freq = scaled_forward_dft(input, ctx);
    std::vector<FreqBlock> result(ctx.length, FreqBlock(dout, m));

    const int todo = opts.conjugate_symmetry ? ctx.canonical_count() : ctx.length;
    parallel_for(static_cast<std::size_t>(todo), [&](std::size_t lu) {
        const int l = static_cast<int>(lu);
        const auto& fd = ctx.frequencies[l];
        const FreqBlock mixed = freq[l] * fd.eigenvectors_inv.transpose();
        FreqBlock applied(dout, m);
        for (int k = 0; k < m; ++k) {
            Vector arg(din);
            for (int c = 0; c < din; ++c)
                arg(c) = Scalar(static_cast<Real>(mixed(c, k).real()),
                                static_cast<Real>(mixed(c, k).imag()));
            const std::complex<Real> s(static_cast<Real>(fd.eigenvalues(k).real()),
                                       static_cast<Real>(fd.eigenvalues(k).imag()));
            Vector val;
            try {
                val = op(s, arg);
            } catch (const SolverError& e) {
                throw SolverError(std::string(role) + ": frequency solve failed at l=" +
                                      std::to_string(l) + ", stage eigenvalue k=" +
                                      std::to_string(k) + " (s=" +
                                      std::to_string(fd.eigenvalues(k).real()) + "+" +
                                      std::to_string(fd.eigenvalues(k).imag()) + "i): " +
                                      e.what(),
                                  e.achieved_residual, e.iterations);
            } catch (const DomainError& e) {
                throw DomainError(std::string(role) + ": transfer rejected frequency at l=" +
                                  std::to_string(l) + ", k=" + std::to_string(k) + ": " +
                                  e.what());
            } catch (const std::exception& e) {
                throw NumericalError(std::string(role) + ": transfer evaluation failed at l=" +
                                     std::to_string(l) + ", k=" + std::to_string(k) + ": " +
                                     e.what());
            }
            for (int c = 0; c < dout; ++c)
                applied(c, k) = ComplexLD(static_cast<long double>(val(c).real()),
                                          static_cast<long double>(val(c).imag()));
        }
        result[l] = applied * fd.eigenvectors.transpose();
    }, opts.workers);

    if (opts.conjugate_symmetry) {
        for (int l = ctx.canonical_count(); l < ctx.length; ++l)
            result[l] = result[ctx.mirror_index(l)].conjugate();
    }
    return scaled_inverse_dft<Real>(result, ctx, dout);
}

} // namespace

StageSeries cq_apply(const CQContext& ctx, const FrequencyOp& transfer,
                     const StageSeries& input, const CQOptions& opts) {
    return cq_transform<double>(ctx, transfer, input, opts, "cq_apply");
}

StageSeries cq_solve(const CQContext& ctx, const FrequencyOp& solver,
                     const StageSeries& rhs, const CQOptions& opts) {
    return cq_transform<double>(ctx, solver, rhs, opts, "cq_solve");
}

StageSeriesLD cq_apply_ld(const CQContext& ctx, const FrequencyOpLD& transfer,
                          const StageSeriesLD& input, const CQOptions& opts) {
    return cq_transform<long double>(ctx, transfer, input, opts, "cq_apply");
}

StageSeriesLD cq_solve_ld(const CQContext& ctx, const FrequencyOpLD& solver,
                          const StageSeriesLD& rhs, const CQOptions& opts) {
    return cq_transform<long double>(ctx, solver, rhs, opts, "cq_solve");
}

std::vector<double> scalar_cq_node_values(const ButcherTableau& tableau, int steps,
                                          double final_time,
                                          const std::function<ComplexLD(ComplexLD)>& transfer,
                                          const std::function<double(double)>& g) {
    using MatLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, Eigen::Dynamic>;
    using VecLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, 1>;
    if (steps < 1) throw DomainError("scalar_cq_node_values: need at least one step");
    const int m = tableau.stages;
    const long double tau = static_cast<long double>(final_time) / steps;

    MatLD a(m, m);
    VecLD bvec(m);
    for (int i = 0; i < m; ++i) {
        bvec(i) = static_cast<long double>(tableau.b(i));
        for (int j = 0; j < m; ++j) a(i, j) = static_cast<long double>(tableau.A(i, j));
    }

    // Weight extraction: radius near 1 keeps the rho^{-n} amplification of the
    // extended-precision roundoff harmless; sample count kills aliasing.
    const long double radius = 0.93L;
    int samples = 1024;
    while (samples < 8 * (steps + 1)) samples *= 2;
    const long double pi_ld = 3.14159265358979323846264338327950288L;

    std::vector<MatLD> weights(steps + 1, MatLD::Zero(m, m));
    for (int j = 0; j < samples; ++j) {
        const long double th = 2.0L * pi_ld * j / samples;
        const ComplexLD zeta = radius * ComplexLD(std::cos(th), std::sin(th));
        MatLD inner = a;
        const ComplexLD f = zeta / (ComplexLD(1.0L, 0.0L) - zeta);
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q) inner(p, q) += f * bvec(q);
        const MatLD delta = inner.inverse() / tau;
        Eigen::ComplexEigenSolver<MatLD> es(delta);
        VecLD kev(m);
        for (int k = 0; k < m; ++k) kev(k) = transfer(es.eigenvalues()(k));
        const MatLD kd = es.eigenvectors() * kev.asDiagonal() * es.eigenvectors().inverse();
        long double r_pow = 1.0L;
        for (int n = 0; n <= steps; ++n) {
            const ComplexLD rot(std::cos(th * n), -std::sin(th * n));
            weights[n] += kd * (rot / (r_pow * static_cast<long double>(samples)));
            r_pow *= radius;
        }
    }

    std::vector<VecLD> data(steps + 1, VecLD(m));
    for (int n = 0; n <= steps; ++n)
        for (int i = 0; i < m; ++i)
            data[n](i) = static_cast<long double>(
                g(static_cast<double>(tau * n + static_cast<long double>(tableau.c(i)) * tau)));

    std::vector<double> nodes(steps + 1, 0.0);
    for (int n = 1; n <= steps; ++n) {
        VecLD acc = VecLD::Zero(m);
        for (int j = 0; j <= n - 1; ++j) acc += weights[n - 1 - j] * data[j];
        nodes[n] = static_cast<double>(acc(m - 1).real());
    }
    return nodes;
}

} // namespace gibc
