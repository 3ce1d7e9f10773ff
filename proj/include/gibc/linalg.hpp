#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace gibc {

using MatVec = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct GmresResult {
    Eigen::VectorXcd solution;
    int iterations = 0;
    double residual = 0.0; // relative to the right-hand side norm
    bool converged = false;
};

// Full (non-restarted) GMRES with modified Gram-Schmidt and one
// reorthogonalization pass; tol is the relative residual target.
GmresResult gmres(const MatVec& apply, const Eigen::VectorXcd& rhs, double tol,
                  int max_iter);

struct ExtremeSingularValues {
    double sigma_max = 0.0;
    double sigma_min = 0.0;
};

// Largest/smallest singular values by power iteration on A^H A and on
// (A^H A)^{-1} through an LU factorization. `tol` is the relative change
// stopping criterion on the Rayleigh quotients.
ExtremeSingularValues extreme_singular_values(const Eigen::MatrixXcd& a,
                                              double tol = 1e-10, int max_iter = 2000);

} // namespace gibc
