#include "gibc/dft.hpp"

#include <cmath>
#include <cstddef>

namespace gibc {

namespace {

const long double kPiLD = 3.14159265358979323846264338327950288L;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_pow2(std::vector<ComplexLD>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const long double ang = sign * 2.0L * kPiLD / static_cast<long double>(len);
        const ComplexLD wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            ComplexLD w(1.0L, 0.0L);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const ComplexLD u = a[i + j];
                const ComplexLD v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void dft_direct(std::vector<ComplexLD>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<ComplexLD> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        ComplexLD acc(0.0L, 0.0L);
        for (std::size_t j = 0; j < n; ++j) {
            // Reduce j*k modulo n before forming the angle.
            const long double ang =
                sign * 2.0L * kPiLD * static_cast<long double>((j * k) % n) /
                static_cast<long double>(n);
            acc += a[j] * ComplexLD(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    a.swap(out);
}

// Bluestein: rewrites the length-L DFT as a cyclic convolution of length
// >= 2L-1, evaluated with the radix-2 FFT.
void dft_bluestein(std::vector<ComplexLD>& a, int sign) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<ComplexLD> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the chirp angle small and exact.
        const std::size_t k2 = (k * k) % (2 * n);
        const long double ang =
            sign * kPiLD * static_cast<long double>(k2) / static_cast<long double>(n);
        chirp[k] = ComplexLD(std::cos(ang), std::sin(ang));
    }

    std::vector<ComplexLD> u(m, ComplexLD(0.0L, 0.0L));
    std::vector<ComplexLD> v(m, ComplexLD(0.0L, 0.0L));
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);

    fft_pow2(u, -1);
    fft_pow2(v, -1);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    fft_pow2(u, +1);
    const long double scale = 1.0L / static_cast<long double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * scale * chirp[k];
}

} // namespace

void dft_ld(std::vector<ComplexLD>& data, int sign) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    if (n <= 32) {
        dft_direct(data, sign);
    } else if (is_power_of_two(n)) {
        fft_pow2(data, sign);
    } else {
        dft_bluestein(data, sign);
    }
}

} // namespace gibc
