#pragma once

/**
 * @file wavelet.hpp
 * Wavelet coefficients and per-level variance ladder.
 *
 * For a series of length N = 2^m the coefficients are
 *     w_{j,k} = 2^{j/2} sum_t X_t psi(2^j t/N - k),  k = 0..2^j-1,
 * with time rescaled to t/N in [0,1). The ladder is the mean of squared
 * coefficients per level, R(j) = 2^{-j} sum_k w_{j,k}^2, for j = 4..m-1.
 */

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/spectral.hpp"

namespace mplm {

enum class WaveletBasis { Haar, MexicanHat };

inline const char* to_string(WaveletBasis b) { return b == WaveletBasis::Haar ? "haar" : "mexhat"; }

/// Beyond |u| = 8 the Mexican hat is below 1e-12 and treated as zero.
inline constexpr double kMexicanHatSupport = 8.0;

/// Mother wavelet.
inline double psi(WaveletBasis basis, double u) {
    if (basis == WaveletBasis::Haar) {
        if (u >= 0.0 && u < 0.5) return 1.0;
        if (u >= 0.5 && u < 1.0) return -1.0;
        return 0.0;
    }
    return (1.0 - u * u) * std::exp(-0.5 * u * u);
}

/// Largest m with 2^m <= n.
inline unsigned dyadic_levels(std::size_t n) {
    unsigned m = 0;
    while ((std::size_t{1} << (m + 1)) <= n) ++m;
    return m;
}

/// The leading 2^m samples used by the wavelet routines.
inline std::span<const double> dyadic_prefix(std::span<const double> x) {
    detail::require(!x.empty(), "series must be non-empty");
    return x.first(std::size_t{1} << dyadic_levels(x.size()));
}

struct WaveletOptions {
    bool centered = true;
};

namespace detail {

inline std::vector<double> wavelet_input(std::span<const double> x, WaveletOptions opt) {
    const auto prefix = dyadic_prefix(x);
    return opt.centered ? centered_copy(prefix) : std::vector<double>(prefix.begin(), prefix.end());
}

inline void require_level(unsigned m, unsigned level) {
    require(level < m, "wavelet level must satisfy j < m where N = 2^m");
}

}  // namespace detail

/// Definitional evaluation: sums X_t psi(2^j t/N - k) over every t in the
/// support. Works for both bases; O(N) per coefficient for Haar.
inline std::vector<double> wavelet_coefficients_direct(std::span<const double> x, WaveletBasis basis, unsigned level,
                                                       WaveletOptions opt = {}) {
    const auto data = detail::wavelet_input(x, opt);
    const std::size_t n = data.size();
    detail::require_level(dyadic_levels(n), level);
    const std::size_t count = std::size_t{1} << level;
    const double scale = static_cast<double>(count) / static_cast<double>(n);
    const double amp = std::sqrt(static_cast<double>(count));
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double u = static_cast<double>(t) * scale - static_cast<double>(k);
            if (basis == WaveletBasis::MexicanHat && std::abs(u) > kMexicanHatSupport) continue;
            acc += data[t] * psi(basis, u);
        }
        out[k] = amp * acc;
    }
    return out;
}

/// Haar coefficients for every level 0..m-1 from a block-sum pyramid, O(N).
/// Level j, translate k: 2^{j/2} (sum of first half - sum of second half) of block k.
inline std::vector<std::vector<double>> haar_pyramid(std::span<const double> x, WaveletOptions opt = {}) {
    auto sums = detail::wavelet_input(x, opt);
    const unsigned m = dyadic_levels(sums.size());
    std::vector<std::vector<double>> levels(m);
    for (unsigned j = m; j-- > 0;) {
        const std::size_t count = std::size_t{1} << j;
        const double amp = std::sqrt(static_cast<double>(count));
        std::vector<double> coeff(count), parent(count);
        for (std::size_t k = 0; k < count; ++k) {
            coeff[k] = amp * (sums[2 * k] - sums[2 * k + 1]);
            parent[k] = sums[2 * k] + sums[2 * k + 1];
        }
        levels[j] = std::move(coeff);
        sums = std::move(parent);
    }
    return levels;
}

namespace detail {

// Mexican-hat level with integer block length L = N/2^j: u = d/L for offset d = t - kL,
// so one table of psi over |d| <= 8L serves every translate.
inline std::vector<double> mexican_hat_level(std::span<const double> data, unsigned level) {
    const std::size_t n = data.size();
    const std::size_t count = std::size_t{1} << level;
    const std::size_t block = n / count;
    const auto reach = static_cast<std::ptrdiff_t>(kMexicanHatSupport * static_cast<double>(block));
    std::vector<double> table(static_cast<std::size_t>(2 * reach + 1));
    for (std::ptrdiff_t d = -reach; d <= reach; ++d)
        table[static_cast<std::size_t>(d + reach)] =
            psi(WaveletBasis::MexicanHat, static_cast<double>(d) / static_cast<double>(block));
    const double amp = std::sqrt(static_cast<double>(count));
    const auto len = static_cast<std::ptrdiff_t>(n);
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto centre = static_cast<std::ptrdiff_t>(k * block);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, centre - reach);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, centre + reach);
        double acc = 0.0;
        for (std::ptrdiff_t t = lo; t <= hi; ++t)
            acc += data[static_cast<std::size_t>(t)] * table[static_cast<std::size_t>(t - centre + reach)];
        out[k] = amp * acc;
    }
    return out;
}

}  // namespace detail

/// Coefficients at one level. Series longer than a power of two are cut to
/// their leading 2^m samples.
inline std::vector<double> wavelet_coefficients(std::span<const double> x, WaveletBasis basis, unsigned level,
                                                WaveletOptions opt = {}) {
    const auto data = detail::wavelet_input(x, opt);
    detail::require_level(dyadic_levels(data.size()), level);
    if (basis == WaveletBasis::Haar) return haar_pyramid(data, {.centered = false})[level];
    return detail::mexican_hat_level(data, level);
}

inline constexpr unsigned kFirstLadderLevel = 4;
inline constexpr double kLadderFloor = 1e-300;

struct WaveletLadder {
    WaveletBasis basis = WaveletBasis::Haar;
    unsigned m = 0;                // N = 2^m samples used
    std::vector<double> rhat;      // R(j) for j = 4..m-1
    std::size_t truncated = 0;     // samples dropped to reach a power of two

    unsigned first_level() const { return kFirstLadderLevel; }
    double at(unsigned j) const { return rhat.at(j - kFirstLadderLevel); }
};

/// R(j) = 2^{-j} sum_k w_{j,k}^2 for j = 4..m-1; needs N >= 64 after truncation.
inline WaveletLadder sample_R(std::span<const double> x, WaveletBasis basis, WaveletOptions opt = {}) {
    const auto data = detail::wavelet_input(x, opt);
    const unsigned m = dyadic_levels(data.size());
    detail::require(m >= 6, "wavelet ladder needs N >= 64 (m >= 6)");
    WaveletLadder ladder{basis, m, {}, x.size() - data.size()};
    std::vector<std::vector<double>> haar;
    if (basis == WaveletBasis::Haar) haar = haar_pyramid(data, {.centered = false});
    for (unsigned j = kFirstLadderLevel; j < m; ++j) {
        const auto coeff = basis == WaveletBasis::Haar ? haar[j] : detail::mexican_hat_level(data, j);
        double acc = 0.0;
        for (double c : coeff) acc += c * c;
        ladder.rhat.push_back(acc / static_cast<double>(coeff.size()));
    }
    return ladder;
}

}  // namespace mplm
