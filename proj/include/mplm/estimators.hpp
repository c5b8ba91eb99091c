#pragma once

/**
 * @file estimators.hpp
 * Estimators of the intermittency parameter s.
 *
 * Long dependence (0.5 < s < 1):
 *  - Perio, Parzen, Cos(1), Cos(2): log-log regression of spectral ordinates
 *    on the first g(N) = floor(N^alpha) Fourier frequencies; the slope c
 *    gives s = 1/(c + 2).
 *  - Varmp: block-sum variance exponent, Var(S_l) ~ l^{3 - 1/s}.
 *  - Vpmp: variance plot, Var(block mean) ~ k^{2d - 1}, d = 1 - 1/(2s).
 *  - Wmp: wavelet ladder R(j) ~ 2^{-2jd}, closed-form least squares.
 * Not-so-long dependence (0 < s < 0.5):
 *  - P, SP: Hoelder exponent of the spectrum at 0, a = ln|I(0) - I(w_j)| / ln w_j,
 *    s = 1/(a + 2), from the raw or Parzen-smoothed periodogram.
 *
 * Pathological inputs never throw from the estimation step itself: the
 * result carries valid = false and a reason. Precondition violations
 * (too-short series, bad options) throw ValidationError.
 */

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/regression.hpp"
#include "mplm/spectral.hpp"
#include "mplm/wavelet.hpp"

namespace mplm {

enum class Method { Perio, Parzen, Cos1, Cos2, Varmp, Vpmp, WmpHaar, WmpMexicanHat, P, SP };

inline constexpr Method kAllMethods[] = {Method::Perio, Method::Parzen,  Method::Cos1,
                                         Method::Cos2,  Method::Varmp,   Method::Vpmp,
                                         Method::WmpHaar, Method::WmpMexicanHat, Method::P,
                                         Method::SP};

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Perio: return "perio";
        case Method::Parzen: return "parzen";
        case Method::Cos1: return "cos1";
        case Method::Cos2: return "cos2";
        case Method::Varmp: return "varmp";
        case Method::Vpmp: return "vpmp";
        case Method::WmpHaar: return "wmp-haar";
        case Method::WmpMexicanHat: return "wmp-mexhat";
        case Method::P: return "p";
        case Method::SP: return "sp";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (name == to_string(m)) return m;
    return std::nullopt;
}

struct EstimateResult {
    Method method = Method::Perio;
    bool valid = true;
    std::string reason;  // set when !valid
    double s_hat = std::nan("");
    double slope = std::nan("");
    double intercept = std::nan("");
    std::size_t points_used = 0;
    std::map<std::string, double> diagnostics;
};

inline constexpr double kOrdinateFloor = 1e-15;

/// memory parameter d = 1 - 1/(2s) and its inverse.
inline double d_from_s(double s) { return 1.0 - 1.0 / (2.0 * s); }
inline double s_from_d(double d) { return 1.0 / (2.0 * (1.0 - d)); }

namespace detail {

inline EstimateResult invalid(EstimateResult r, std::string why) {
    r.valid = false;
    r.reason = std::move(why);
    r.s_hat = std::nan("");
    return r;
}

inline EstimateResult finish(EstimateResult r) {
    if (!std::isfinite(r.s_hat) || r.s_hat <= 0.0) return invalid(std::move(r), "estimate is not a positive finite number");
    return r;
}

inline std::vector<double> log_floor(std::span<const double> v, std::size_t& clamps) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double y = v[i];
        if (!(y > kOrdinateFloor)) {
            y = kOrdinateFloor;
            ++clamps;
        }
        out[i] = std::log(y);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Spectral regression (Perio, Parzen, Cos)

struct SpectralRegressionOptions {
    double band_alpha = 0.5;                // g(N) = floor(N^alpha)
    std::optional<std::size_t> truncation{};  // lag-window m; default per window, see below
    bool centered = true;                   // raw periodogram only
};

/// Cosine-bell truncation tied to the band: m = floor(N^{1 - alpha}) = N / g(N),
/// so the spectral window is as wide as the regression band.
inline std::size_t cosine_bell_truncation(std::size_t n, double band_alpha) {
    return std::max<std::size_t>(1, floor_power(n, 1.0 - band_alpha));
}

/// Regress ln(ordinate_j) on ln j for j = 1..g, where ordinates[j-1] sits at w_j.
/// Returns s = 1/(c + 2) for slope c.
inline EstimateResult spectral_regression_from_ordinates(Method method, std::span<const double> ordinates) {
    EstimateResult r;
    r.method = method;
    detail::require(ordinates.size() >= 2, "spectral regression needs at least two ordinates");
    std::size_t clamps = 0;
    const auto ys = detail::log_floor(ordinates, clamps);
    std::vector<double> xs(ordinates.size());
    for (std::size_t j = 1; j <= xs.size(); ++j) xs[j - 1] = std::log(static_cast<double>(j));
    const auto fit = ols_slope(xs, ys);
    r.slope = fit.slope;
    r.intercept = fit.intercept;
    r.points_used = xs.size();
    r.diagnostics["clamped"] = static_cast<double>(clamps);
    r.diagnostics["r_squared"] = fit.r_squared;
    if (!(fit.slope + 2.0 > 0.0)) return detail::invalid(std::move(r), "slope <= -2 gives no positive s");
    r.s_hat = 1.0 / (fit.slope + 2.0);
    return detail::finish(std::move(r));
}

namespace detail {

inline std::size_t band_size(std::size_t n, double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "band exponent must lie in (0, 1)");
    const std::size_t g = floor_power(n, alpha);
    require(g >= 2 && g < n, "series too short for the regression band");
    return g;
}

inline EstimateResult smoothed_regression(Method method, std::span<const double> x, LagWindow window,
                                          const SpectralRegressionOptions& opt) {
    require(x.size() >= 16, "spectral estimators need N >= 16");
    const std::size_t g = band_size(x.size(), opt.band_alpha);
    const std::size_t m = opt.truncation.value_or(window == LagWindow::Parzen
                                                      ? default_truncation(x.size())
                                                      : cosine_bell_truncation(x.size(), opt.band_alpha));
    const auto p = smoothed_periodogram(x, {window, m});
    auto r = spectral_regression_from_ordinates(method, std::span(p.ordinates).first(g));
    r.diagnostics["truncation"] = static_cast<double>(m);
    r.diagnostics["band"] = static_cast<double>(g);
    return r;
}

}  // namespace detail

inline EstimateResult perio_estimate(std::span<const double> x, const SpectralRegressionOptions& opt = {}) {
    detail::require(x.size() >= 16, "spectral estimators need N >= 16");
    const std::size_t g = detail::band_size(x.size(), opt.band_alpha);
    const auto p = periodogram(x, {.centered = opt.centered});
    auto r = spectral_regression_from_ordinates(Method::Perio, std::span(p.ordinates).first(g));
    r.diagnostics["band"] = static_cast<double>(g);
    return r;
}

inline EstimateResult parzen_estimate(std::span<const double> x, const SpectralRegressionOptions& opt = {}) {
    return detail::smoothed_regression(Method::Parzen, x, LagWindow::Parzen, opt);
}

/// Cosine-bell window; alpha = 0.5 is Cos(1), alpha = 0.7 is Cos(2).
inline EstimateResult cos_estimate(std::span<const double> x, double band_alpha,
                                   SpectralRegressionOptions opt = {}) {
    opt.band_alpha = band_alpha;
    Method method = Method::Cos1;
    if (std::abs(band_alpha - 0.7) < 1e-12) method = Method::Cos2;
    auto r = detail::smoothed_regression(method, x, LagWindow::CosineBell, opt);
    r.diagnostics["band_alpha"] = band_alpha;
    return r;
}

// ---------------------------------------------------------------------------
// Variance of partial sums (Varmp) and variance plot (Vpmp)

namespace detail {

/// Sample variance (divisor B-1) of the statistic over disjoint blocks of length len.
inline double block_variance(std::span<const double> x, std::size_t len, bool means) {
    const std::size_t blocks = x.size() / len;
    std::vector<double> stat(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double acc = 0.0;
        for (std::size_t t = b * len; t < (b + 1) * len; ++t) acc += x[t];
        stat[b] = means ? acc / static_cast<double>(len) : acc;
    }
    const double mu = mean_of(stat);
    double ss = 0.0;
    for (double v : stat) ss += (v - mu) * (v - mu);
    return ss / static_cast<double>(blocks - 1);
}

}  // namespace detail

inline constexpr std::size_t kMinBlocks = 8;

/// s from a block-sum variance V at block length l: s = 1/(3 - ln V / ln l).
inline EstimateResult varmp_from_variance(double variance, std::size_t block_length) {
    EstimateResult r;
    r.method = Method::Varmp;
    r.points_used = 1;
    r.diagnostics["block_length"] = static_cast<double>(block_length);
    r.diagnostics["variance"] = variance;
    detail::require(block_length >= 2, "block length must be >= 2");
    if (!(variance > 0.0)) return detail::invalid(std::move(r), "block-sum variance is zero");
    const double ratio = std::log(variance) / std::log(static_cast<double>(block_length));
    r.slope = ratio;
    if (!(3.0 - ratio > 0.0)) return detail::invalid(std::move(r), "variance exponent >= 3");
    r.s_hat = 1.0 / (3.0 - ratio);
    return detail::finish(std::move(r));
}

/// Disjoint blocks of length floor(N^theta); needs at least 8 blocks.
inline EstimateResult varmp_estimate(std::span<const double> x, double theta = 0.7) {
    detail::require(theta > 0.0 && theta < 1.0, "block exponent must lie in (0, 1)");
    const std::size_t len = floor_power(x.size(), theta);
    detail::require(len >= 2 && x.size() / len >= kMinBlocks, "series too short for 8 disjoint blocks");
    auto r = varmp_from_variance(detail::block_variance(x, len, false), len);
    r.diagnostics["blocks"] = static_cast<double>(x.size() / len);
    return r;
}

struct VarianceGrid {
    double lo_exponent = 0.3;
    double hi_exponent = 0.7;
    std::size_t sizes = 10;
};

/// Geometric grid of block sizes floor(N^0.3)..floor(N^0.7), deduplicated,
/// keeping only sizes with at least 8 disjoint blocks.
inline std::vector<std::size_t> variance_plot_grid(std::size_t n, const VarianceGrid& g = {}) {
    detail::require(g.sizes >= 2 && g.lo_exponent < g.hi_exponent, "invalid variance-plot grid");
    std::vector<std::size_t> out;
    const double lo = std::log(static_cast<double>(std::max<std::size_t>(1, floor_power(n, g.lo_exponent))));
    const double hi = std::log(static_cast<double>(std::max<std::size_t>(1, floor_power(n, g.hi_exponent))));
    for (std::size_t i = 0; i < g.sizes; ++i) {
        const double e = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g.sizes - 1);
        const auto k = static_cast<std::size_t>(std::floor(std::exp(e) + 1e-9));
        if (k < 1 || n / k < kMinBlocks) continue;
        if (out.empty() || out.back() != k) out.push_back(k);
    }
    return out;
}

/// Slope beta of ln V(k) on ln k gives d = (beta + 1)/2 and s = 1/(2(1 - d)).
inline EstimateResult vpmp_from_variances(std::span<const std::size_t> sizes, std::span<const double> variances) {
    EstimateResult r;
    r.method = Method::Vpmp;
    detail::require(sizes.size() == variances.size(), "grid and variances differ in length");
    detail::require(sizes.size() >= 4, "variance plot needs at least 4 block sizes");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(variances[i] > 0.0)) return detail::invalid(std::move(r), "zero block-mean variance");
        xs.push_back(std::log(static_cast<double>(sizes[i])));
        ys.push_back(std::log(variances[i]));
    }
    const auto fit = ols_slope(xs, ys);
    r.slope = fit.slope;
    r.intercept = fit.intercept;
    r.points_used = xs.size();
    const double d = 0.5 * (fit.slope + 1.0);
    r.diagnostics["d_hat"] = d;
    r.diagnostics["r_squared"] = fit.r_squared;
    if (!(d < 1.0)) return detail::invalid(std::move(r), "d_hat >= 1");
    r.s_hat = s_from_d(d);
    return detail::finish(std::move(r));
}

inline EstimateResult vpmp_estimate(std::span<const double> x, const VarianceGrid& grid = {}) {
    const auto sizes = variance_plot_grid(x.size(), grid);
    detail::require(sizes.size() >= 4, "series too short for 4 block sizes with 8 blocks each");
    std::vector<double> v;
    for (std::size_t k : sizes) v.push_back(detail::block_variance(x, k, true));
    auto r = vpmp_from_variances(sizes, v);
    r.diagnostics["k_min"] = static_cast<double>(sizes.front());
    r.diagnostics["k_max"] = static_cast<double>(sizes.back());
    return r;
}

// ---------------------------------------------------------------------------
// Wavelet (Wmp)

/// Closed form over j = 4..m-1 with centred abscissae x_j = ln 2^{-2j} - mean:
///   s = sum x_j^2 / (2 (sum x_j^2 - sum x_j ln R(j))).
inline EstimateResult wmp_from_ladder(const WaveletLadder& ladder) {
    EstimateResult r;
    r.method = ladder.basis == WaveletBasis::Haar ? Method::WmpHaar : Method::WmpMexicanHat;
    detail::require(ladder.rhat.size() >= 2, "wavelet ladder needs at least two levels");
    const std::size_t levels = ladder.rhat.size();
    std::size_t floored = 0;
    double mean_abscissa = 0.0;
    for (std::size_t i = 0; i < levels; ++i)
        mean_abscissa += -2.0 * static_cast<double>(kFirstLadderLevel + i) * std::numbers::ln2;
    mean_abscissa /= static_cast<double>(levels);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
        double rj = ladder.rhat[i];
        if (!(rj > kLadderFloor)) {
            rj = kLadderFloor;
            ++floored;
        }
        const double xj = -2.0 * static_cast<double>(kFirstLadderLevel + i) * std::numbers::ln2 - mean_abscissa;
        sxx += xj * xj;
        sxy += xj * std::log(rj);
    }
    r.points_used = levels;
    r.slope = sxy / sxx;  // d_hat
    r.diagnostics["d_hat"] = r.slope;
    r.diagnostics["floored"] = static_cast<double>(floored);
    r.diagnostics["truncated"] = static_cast<double>(ladder.truncated);
    const double denom = 2.0 * (sxx - sxy);
    if (!(denom > 0.0)) return detail::invalid(std::move(r), "Wmp denominator <= 0");
    r.s_hat = sxx / denom;
    return detail::finish(std::move(r));
}

inline EstimateResult wmp_estimate(std::span<const double> x, WaveletBasis basis, WaveletOptions opt = {}) {
    return wmp_from_ladder(sample_R(x, basis, opt));
}

// ---------------------------------------------------------------------------
// Hoelder exponent at zero frequency (P, SP)

enum class HolderSmoothing { None, Parzen };

struct HolderOptions {
    HolderSmoothing smoothing = HolderSmoothing::None;
    std::size_t freq_index = 1;             // j of the nearby Fourier frequency
    bool average = false;                   // average s over j = 1..floor(N^0.2)
    std::optional<std::size_t> truncation{};  // Parzen m; default floor(N^0.9)
};

/// a = ln|I(0) - I(w)| / ln|w|,  s = 1/(a + 2).
inline EstimateResult holder_from_ordinates(Method method, double at_zero, double at_freq, double freq) {
    EstimateResult r;
    r.method = method;
    r.points_used = 2;
    detail::require(freq > 0.0 && freq != 1.0, "frequency must be positive and != 1");
    const double diff = std::abs(at_zero - at_freq);
    if (!(diff > 0.0)) return detail::invalid(std::move(r), "I(0) equals I(w_j)");
    const double a = std::log(diff) / std::log(freq);
    r.slope = a;
    r.diagnostics["holder_exponent"] = a;
    if (!(a + 2.0 > 0.0)) return detail::invalid(std::move(r), "Hoelder exponent <= -2");
    r.s_hat = 1.0 / (a + 2.0);
    return detail::finish(std::move(r));
}

inline EstimateResult holder_estimate(std::span<const double> x, const HolderOptions& opt = {}) {
    const std::size_t n = x.size();
    detail::require(n >= 16, "Hoelder estimators need N >= 16");
    const Method method = opt.smoothing == HolderSmoothing::None ? Method::P : Method::SP;
    const Periodogram p = opt.smoothing == HolderSmoothing::None
                              ? periodogram(x, {.centered = true})
                              : smoothed_periodogram(x, {LagWindow::Parzen,
                                                         opt.truncation.value_or(default_truncation(n))});
    if (!opt.average) {
        detail::require(opt.freq_index >= 1 && opt.freq_index < n / 2, "frequency index must satisfy 1 <= j < N/2");
        auto r = holder_from_ordinates(method, p.at_zero(), p.ordinates[opt.freq_index - 1],
                                       p.freqs[opt.freq_index - 1]);
        r.diagnostics["freq_index"] = static_cast<double>(opt.freq_index);
        return r;
    }
    const std::size_t top = std::max<std::size_t>(1, floor_power(n, 0.2));
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 1; j <= top; ++j) {
        const auto r = holder_from_ordinates(method, p.at_zero(), p.ordinates[j - 1], p.freqs[j - 1]);
        if (r.valid) {
            acc += r.s_hat;
            ++used;
        }
    }
    EstimateResult r;
    r.method = method;
    r.points_used = used;
    r.diagnostics["averaged_over"] = static_cast<double>(top);
    if (used == 0) return detail::invalid(std::move(r), "no valid frequency in the averaging window");
    r.s_hat = acc / static_cast<double>(used);
    return detail::finish(std::move(r));
}

// ---------------------------------------------------------------------------

struct EstimatorConfig {
    double varmp_theta = 0.7;
    VarianceGrid vpmp_grid;
    std::size_t holder_freq_index = 1;
    bool holder_average = false;
    bool centered = true;
};

/// Dispatch by method tag.
inline EstimateResult estimate(Method method, std::span<const double> x, const EstimatorConfig& cfg = {}) {
    switch (method) {
        case Method::Perio: return perio_estimate(x, {.centered = cfg.centered});
        case Method::Parzen: return parzen_estimate(x);
        case Method::Cos1: return cos_estimate(x, 0.5);
        case Method::Cos2: return cos_estimate(x, 0.7);
        case Method::Varmp: return varmp_estimate(x, cfg.varmp_theta);
        case Method::Vpmp: return vpmp_estimate(x, cfg.vpmp_grid);
        case Method::WmpHaar: return wmp_estimate(x, WaveletBasis::Haar, {.centered = cfg.centered});
        case Method::WmpMexicanHat: return wmp_estimate(x, WaveletBasis::MexicanHat, {.centered = cfg.centered});
        case Method::P:
        case Method::SP: {
            HolderOptions h;
            h.smoothing = method == Method::P ? HolderSmoothing::None : HolderSmoothing::Parzen;
            h.freq_index = cfg.holder_freq_index;
            h.average = cfg.holder_average;
            return holder_estimate(x, h);
        }
    }
    throw ValidationError("unknown method");
}

}  // namespace mplm
