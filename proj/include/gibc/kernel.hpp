#pragma once

#include <complex>

#include <Eigen/Dense>

#include "gibc/errors.hpp"
#include "gibc/mesh.hpp"

namespace gibc {

using Complex = std::complex<double>;
using Vec3c = Eigen::Vector3cd;

// Fundamental solution G(s,r) = exp(-s|r|) / (4 pi |r|), Re s > 0.
inline Complex green(Complex s, const Vec3& r) {
    const double len = r.norm();
    if (len <= 0.0) throw DomainError("green: evaluation at r = 0");
    return std::exp(-s * len) / (4.0 * M_PI * len);
}

// Gradient with respect to the first spatial slot:
// grad G = -(s|r|+1) exp(-s|r|) / (4 pi |r|^3) * r.
inline Vec3c green_grad(Complex s, const Vec3& r) {
    const double len = r.norm();
    if (len <= 0.0) throw DomainError("green_grad: evaluation at r = 0");
    const Complex g = std::exp(-s * len) / (4.0 * M_PI * len);
    const Complex coeff = -(s * len + 1.0) * g / (len * len);
    return coeff * r.cast<Complex>();
}

// Value and gradient sharing one exponential evaluation (assembly hot path).
struct KernelValues {
    Complex g;
    Vec3c grad;
};

inline KernelValues green_with_grad(Complex s, const Vec3& r) {
    const double len = r.norm();
    const Complex g = std::exp(-s * len) / (4.0 * M_PI * len);
    const Complex coeff = -(s * len + 1.0) * g / (len * len);
    return {g, coeff * r.cast<Complex>()};
}

// Exterior fields of an electric point dipole with moment p located at
// `source`, solving s E = curl H, s H = -curl E away from the source:
//   E = Hess(G) p - s^2 G p,       H = s grad G x p.
// Decaying for Re s > 0, hence equal to their representation from the
// exterior traces: the executable anchor for Calderon-identity tests.
struct DipoleField {
    Vec3c E, H;
};

inline DipoleField electric_dipole(Complex s, const Vec3& moment, const Vec3& source,
                                   const Vec3& x) {
    const Vec3 rv = x - source;
    const double r = rv.norm();
    if (r <= 0.0) throw DomainError("electric_dipole: evaluation at the source");
    const Vec3 rhat = rv / r;
    const Complex g = std::exp(-s * r) / (4.0 * M_PI * r);
    const Complex g1 = -(s + 1.0 / r) * g;
    const Complex g2 = (s * s + 2.0 * s / r + 2.0 / (r * r)) * g;
    const double radial = rhat.dot(moment);
    DipoleField f;
    f.E = g2 * radial * rhat.cast<Complex>() +
          (g1 / r) * (moment - radial * rhat).cast<Complex>() -
          s * s * g * moment.cast<Complex>();
    f.H = s * g1 * rhat.cross(moment).cast<Complex>();
    return f;
}

} // namespace gibc
