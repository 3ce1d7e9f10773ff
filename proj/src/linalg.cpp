#include "gibc/linalg.hpp"

#include <cmath>

#include <Eigen/LU>

#include "gibc/errors.hpp"

namespace gibc {

GmresResult gmres(const MatVec& apply, const Eigen::VectorXcd& rhs, double tol, int max_iter) {
    using Eigen::MatrixXcd;
    using Eigen::VectorXcd;
    using Complex = std::complex<double>;

    GmresResult result;
    const Eigen::Index n = rhs.size();
    const double bnorm = rhs.norm();
    result.solution = VectorXcd::Zero(n);
    if (bnorm == 0.0) {
        result.converged = true;
        return result;
    }
    max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, n));

    MatrixXcd basis(n, max_iter + 1);
    MatrixXcd hess = MatrixXcd::Zero(max_iter + 1, max_iter);
    VectorXcd g = VectorXcd::Zero(max_iter + 1);
    std::vector<Complex> cs(max_iter), sn(max_iter);

    basis.col(0) = rhs / bnorm;
    g(0) = bnorm;

    int k = 0;
    double res = 1.0;
    for (; k < max_iter; ++k) {
        VectorXcd w = apply(basis.col(k));
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= k; ++i) {
                const Complex h = basis.col(i).dot(w);
                hess(i, k) += h;
                w -= h * basis.col(i);
            }
        }
        const double hk1 = w.norm();
        hess(k + 1, k) = hk1;
        if (hk1 > 0.0) basis.col(k + 1) = w / hk1;

        for (int i = 0; i < k; ++i) {
            const Complex t = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
            hess(i + 1, k) = -std::conj(sn[i]) * hess(i, k) + std::conj(cs[i]) * hess(i + 1, k);
            hess(i, k) = t;
        }
        const Complex a = hess(k, k);
        const double b = hk1;
        const double denom = std::sqrt(std::norm(a) + b * b);
        if (denom == 0.0) {
            cs[k] = 1.0;
            sn[k] = 0.0;
        } else {
            cs[k] = std::conj(a) / denom;
            sn[k] = b / denom;
        }
        hess(k, k) = cs[k] * a + sn[k] * b;
        hess(k + 1, k) = 0.0;
        g(k + 1) = -std::conj(sn[k]) * g(k);
        g(k) = cs[k] * g(k);

        res = std::abs(g(k + 1)) / bnorm;
        if (res <= tol || hk1 == 0.0) {
            ++k;
            break;
        }
    }

    VectorXcd y = VectorXcd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
        Complex sum = g(i);
        for (int j = i + 1; j < k; ++j) sum -= hess(i, j) * y(j);
        y(i) = sum / hess(i, i);
    }
    result.solution = basis.leftCols(k) * y;
    result.iterations = k;
    result.residual = res;
    result.converged = res <= tol;
    return result;
}

ExtremeSingularValues extreme_singular_values(const Eigen::MatrixXcd& a, double tol,
                                              int max_iter) {
    using Eigen::VectorXcd;
    const Eigen::Index n = a.rows();
    if (n == 0 || a.cols() != n)
        throw DomainError("extreme_singular_values: square nonempty matrix required");

    ExtremeSingularValues out;
    // sigma_max^2: power iteration on A^H A with a deterministic real start.
    {
        VectorXcd v = VectorXcd::Ones(n).normalized();
        double prev = 0.0;
        for (int it = 0; it < max_iter; ++it) {
            VectorXcd w = a.adjoint() * (a * v);
            const double lambda = w.norm();
            if (lambda == 0.0) break;
            v = w / lambda;
            if (it > 2 && std::abs(lambda - prev) <= tol * lambda) {
                prev = lambda;
                break;
            }
            prev = lambda;
        }
        out.sigma_max = std::sqrt(prev);
    }
    // sigma_min^2: inverse power iteration through an LU of A.
    {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        VectorXcd v = VectorXcd::Ones(n).normalized();
        double prev = 0.0;
        for (int it = 0; it < max_iter; ++it) {
            VectorXcd w = lu.solve(v);
            w = lu.adjoint().solve(w);
            const double lambda = w.norm(); // approximates 1 / sigma_min^2
            if (!std::isfinite(lambda) || lambda == 0.0)
                throw NumericalError("extreme_singular_values: singular factorization");
            v = w / lambda;
            if (it > 2 && std::abs(lambda - prev) <= tol * lambda) {
                prev = lambda;
                break;
            }
            prev = lambda;
        }
        out.sigma_min = 1.0 / std::sqrt(prev);
    }
    return out;
}

} // namespace gibc
