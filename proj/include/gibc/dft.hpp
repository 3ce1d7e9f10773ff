#pragma once

#include <complex>
#include <vector>

namespace gibc {

// DFT of arbitrary length in extended precision. The contour transforms scale
// by rho^{-n} with rho^N = sqrt(eps), which amplifies transform roundoff by up
// to 1/sqrt(eps); accumulating in long double keeps that amplification below
// double roundoff at the output. Radix-2 FFT plus Bluestein for general
// lengths; small lengths fall back to the direct sum.
using ComplexLD = std::complex<long double>;

// In-place forward (sign=-1) or inverse-kernel (sign=+1) DFT; no 1/L scaling.
void dft_ld(std::vector<ComplexLD>& data, int sign);

} // namespace gibc
