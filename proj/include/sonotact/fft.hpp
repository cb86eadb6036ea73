#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sonotact/errors.hpp"

namespace sonotact::fft {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey. n must be a power of two.
inline void transform_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    int levels = 0;
    while ((std::size_t(1) << levels) < n) ++levels;

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = 0;
        for (int b = 0; b < levels; ++b) j |= ((i >> b) & 1u) << (levels - 1 - b);
        if (j > i) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Bluestein chirp-z: DFT of arbitrary length via a power-of-two convolution.
inline void transform_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;

    // Chirp table; angle computed modulo 2n to keep the argument small.
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t sq = (i * i) % (2 * n);
        const double ang = (inverse ? 1.0 : -1.0) * kPi * static_cast<double>(sq) /
                           static_cast<double>(n);
        chirp[i] = {std::cos(ang), std::sin(ang)};
    }

    std::vector<std::complex<double>> x(m), y(m);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] * chirp[i];
    y[0] = std::conj(chirp[0]);
    for (std::size_t i = 1; i < n; ++i) y[i] = y[m - i] = std::conj(chirp[i]);

    transform_radix2(x, false);
    transform_radix2(y, false);
    for (std::size_t i = 0; i < m; ++i) x[i] *= y[i];
    transform_radix2(x, true);

    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * inv_m * chirp[i];
}

// Forward DFT: X[k] = sum_j x[j] exp(-2*pi*i*j*k/n). No normalization.
inline void forward(std::vector<std::complex<double>>& a) {
    if (is_power_of_two(a.size()))
        transform_radix2(a, false);
    else
        transform_bluestein(a, false);
}

// Inverse DFT including the 1/n factor.
inline void inverse(std::vector<std::complex<double>>& a) {
    if (is_power_of_two(a.size()))
        transform_radix2(a, true);
    else
        transform_bluestein(a, true);
    const double inv_n = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= inv_n;
}

// One-sided spectrum of a real signal: bins 0..n/2 inclusive.
inline std::vector<std::complex<double>> real_forward_onesided(
    const std::vector<double>& x) {
    std::vector<std::complex<double>> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
    forward(a);
    a.resize(x.size() / 2 + 1);
    return a;
}

}  // namespace sonotact::fft
