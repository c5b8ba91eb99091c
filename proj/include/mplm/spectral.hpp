#pragma once

/**
 * @file spectral.hpp
 * Sample autocovariance, raw periodogram and lag-window spectral estimates.
 *
 * The periodogram keeps the normalization
 *     I(w) = |f_N(w)|^2,   f_N(w) = 1/(2 pi sqrt(N)) sum_t x_t e^{-i w t},
 * on the Fourier grid w_h = 2 pi h / N, h = 1..N (w_N = 2 pi aliases h = 0).
 * The smoothed estimate is
 *     f_sm(w) = 1/(2 pi) [acv(0) + 2 sum_{k=1}^{m} w(k/m) acv(k) cos(w k)].
 * Constant factors only move regression intercepts, never slopes.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/fft.hpp"

namespace mplm {

/// floor(n^alpha), robust to pow() landing just below an integer.
inline std::size_t floor_power(std::size_t n, double alpha) {
    return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), alpha) + 1e-9));
}

inline double mean_of(std::span<const double> x) {
    return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline std::vector<double> centered_copy(std::span<const double> x) {
    const double m = mean_of(x);
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [m](double v) { return v - m; });
    return out;
}

// ---------------------------------------------------------------------------
// Autocovariance

struct AcvEstimate {
    std::vector<double> values;  // acv(0..L), biased 1/N divisor
    std::size_t n = 0;

    std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }

    /// Autocorrelation acv(h)/acv(0); undefined for a constant series.
    double rho(std::size_t h) const {
        if (!(values.at(0) > 0.0)) throw ValidationError("autocorrelation undefined: zero variance");
        return values.at(h) / values[0];
    }
};

namespace detail {

inline std::vector<double> acv_direct(std::span<const double> dev, std::size_t max_lag) {
    const std::size_t n = dev.size();
    std::vector<double> g(max_lag + 1);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        double acc = 0.0;
        for (std::size_t t = 0; t + h < n; ++t) acc += dev[t] * dev[t + h];
        g[h] = acc / static_cast<double>(n);
    }
    return g;
}

inline std::vector<double> acv_fft(std::span<const double> dev, std::size_t max_lag) {
    const std::size_t n = dev.size();
    const std::size_t m = next_power_of_two(n + max_lag + 1);
    std::vector<cplx> a(m);
    for (std::size_t t = 0; t < n; ++t) a[t] = dev[t];
    fft_radix2(a, false);
    for (auto& v : a) v = std::norm(v);
    fft_radix2(a, true);
    std::vector<double> g(max_lag + 1);
    const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(n));
    for (std::size_t h = 0; h <= max_lag; ++h) g[h] = a[h].real() * scale;
    return g;
}

}  // namespace detail

/// acv(h) = (1/N) sum_{t=0}^{N-1-h} (x_t - mean)(x_{t+h} - mean), h = 0..max_lag.
inline AcvEstimate sample_acv(std::span<const double> x, std::size_t max_lag) {
    detail::require(!x.empty(), "series must be non-empty");
    detail::require(max_lag < x.size(), "max_lag must be < N");
    const auto dev = centered_copy(x);
    const double work = static_cast<double>(x.size()) * static_cast<double>(max_lag + 1);
    auto g = work < 2e5 ? detail::acv_direct(dev, max_lag) : detail::acv_fft(dev, max_lag);
    return {std::move(g), x.size()};
}

// ---------------------------------------------------------------------------
// Lag windows

enum class LagWindow { Parzen, CosineBell };

inline const char* to_string(LagWindow w) { return w == LagWindow::Parzen ? "parzen" : "cosbell"; }

struct LagWindowSpec {
    LagWindow kind = LagWindow::Parzen;
    std::size_t m = 1;  // truncation point, 1 <= m < N
};

/// Default truncation point floor(N^0.9), used for both windows.
inline std::size_t default_truncation(std::size_t n) { return std::max<std::size_t>(1, floor_power(n, 0.9)); }

/// Parzen: 1 - 6x^2 + 6x^3 on [0, 1/2], 2(1-x)^3 on (1/2, 1].
/// Cosine bell (Tukey-Hanning): (1 + cos(pi x)) / 2.
inline double lag_window_weight(LagWindow kind, double x) {
    detail::require(std::isfinite(x) && x >= 0.0 && x <= 1.0, "lag window argument must lie in [0, 1]");
    if (kind == LagWindow::Parzen) {
        if (x <= 0.5) return 1.0 - 6.0 * x * x + 6.0 * x * x * x;
        const double r = 1.0 - x;
        return 2.0 * r * r * r;
    }
    return 0.5 * (1.0 + std::cos(std::numbers::pi * x));
}

// ---------------------------------------------------------------------------
// Periodogram

struct Periodogram {
    std::vector<double> freqs;      // w_h = 2 pi h / N, h = 1..N
    std::vector<double> ordinates;  // same length as freqs
    std::optional<LagWindowSpec> window;  // empty for the raw periodogram

    std::size_t size() const { return freqs.size(); }
    bool smoothed() const { return window.has_value(); }
    /// Ordinate at h = 0 (stored at the w = 2 pi slot).
    double at_zero() const { return ordinates.back(); }
};

inline std::vector<double> fourier_grid(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t h = 1; h <= n; ++h)
        w[h - 1] = 2.0 * std::numbers::pi * static_cast<double>(h) / static_cast<double>(n);
    return w;
}

struct PeriodogramOptions {
    bool centered = true;  // subtract the sample mean first
};

/// Raw periodogram with the 1/(2 pi sqrt N) transform normalization.
inline Periodogram periodogram(std::span<const double> x, PeriodogramOptions opt = {}) {
    detail::require(x.size() >= 2, "periodogram needs N >= 2");
    const std::size_t n = x.size();
    const auto data = opt.centered ? centered_copy(x) : std::vector<double>(x.begin(), x.end());
    const auto spec = dft_real(data);
    const double scale = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(n));
    Periodogram p{fourier_grid(n), std::vector<double>(n), std::nullopt};
    for (std::size_t h = 1; h <= n; ++h) p.ordinates[h - 1] = std::norm(spec[h % n]) * scale;
    return p;
}

/// Lag-window estimate from precomputed autocovariances (needs acv(0..m)).
inline Periodogram smoothed_from_acv(const AcvEstimate& acv, LagWindowSpec window) {
    const std::size_t n = acv.n;
    detail::require(window.m >= 1 && window.m < n, "truncation point must satisfy 1 <= m < N");
    detail::require(acv.max_lag() >= window.m, "autocovariances missing up to lag m");
    std::vector<cplx> c(n);
    c[0] = acv.values[0];
    for (std::size_t k = 1; k <= window.m; ++k) {
        const double v = lag_window_weight(window.kind, static_cast<double>(k) / static_cast<double>(window.m)) *
                         acv.values[k];
        // cos(w_h k) = cos(w_h (N - k)) on the grid, so the symmetric tap folds into slot N-k.
        c[k] += v;
        c[n - k] += v;
    }
    const auto spec = dft(c);
    Periodogram p{fourier_grid(n), std::vector<double>(n), window};
    const double scale = 1.0 / (2.0 * std::numbers::pi);
    for (std::size_t h = 1; h <= n; ++h) p.ordinates[h - 1] = spec[h % n].real() * scale;
    return p;
}

inline Periodogram smoothed_periodogram(std::span<const double> x, LagWindowSpec window) {
    detail::require(x.size() >= 2, "smoothed periodogram needs N >= 2");
    detail::require(window.m >= 1 && window.m < x.size(), "truncation point must satisfy 1 <= m < N");
    return smoothed_from_acv(sample_acv(x, window.m), window);
}

}  // namespace mplm
