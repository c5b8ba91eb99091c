#pragma once

// Discrete Fourier transform for arbitrary lengths: iterative radix-2 for
// powers of two, Bluestein's chirp-z convolution otherwise.
//   X_h = sum_t x_t exp(-2 pi i h t / n)

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace mplm {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * twiddle[k * stride];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

inline std::vector<cplx> bluestein(std::span<const cplx> x, bool inverse) {
    const std::size_t n = x.size();
    const std::size_t m = next_power_of_two(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;
    // chirp_k = exp(sign * i pi k^2 / n), with k^2 reduced mod 2n to keep the angle small.
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto k2 = static_cast<std::uint64_t>(k) * k % (2 * static_cast<std::uint64_t>(n));
        const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<cplx> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_radix2(a, false);
    fft_radix2(b, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_radix2(a, true);
    std::vector<cplx> out(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
    return out;
}

}  // namespace detail

/// Unnormalized forward DFT (inverse = true flips the exponent sign, still unnormalized).
inline std::vector<cplx> dft(std::span<const cplx> x, bool inverse = false) {
    if (x.empty()) return {};
    if (is_power_of_two(x.size())) {
        std::vector<cplx> a(x.begin(), x.end());
        detail::fft_radix2(a, inverse);
        return a;
    }
    return detail::bluestein(x, inverse);
}

inline std::vector<cplx> dft_real(std::span<const double> x) {
    std::vector<cplx> c(x.begin(), x.end());
    return dft(c);
}

}  // namespace mplm
