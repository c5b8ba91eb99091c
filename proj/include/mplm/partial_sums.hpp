#pragma once

/**
 * @file partial_sums.hpp
 * Variance of partial sums S_N = X_0 + ... + X_{N-1}.
 *
 * For any stationary process
 *     Var(S_N) = N acv(0) + 2 sum_{j=1}^{N-1} (N - j) acv(j),
 * and acv(h) ~ h^{-u} with u in (0,1) gives Var(S_N) ~ N^{2-u}. For the MP
 * process u = 1/s - 1, so the exponent is 3 - 1/s.
 */

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/model.hpp"
#include "mplm/regression.hpp"
#include "mplm/rng.hpp"
#include "mplm/spectral.hpp"

namespace mplm {

/// Needs acv(0..N-1).
inline double var_partial_sum(std::span<const double> acv, std::size_t n) {
    detail::require(n >= 1, "N must be >= 1");
    detail::require(acv.size() >= n, "autocovariances needed for lags 0..N-1");
    const auto nn = static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 1; j < n; ++j) acc += (nn - static_cast<double>(j)) * acv[j];
    return nn * acv[0] + 2.0 * acc;
}

inline double var_partial_sum(const AcvEstimate& acv, std::size_t n) { return var_partial_sum(acv.values, n); }

/// (1/N) sum_{j=1}^{N} (1 - j/N) (j/N)^{-u}, the Riemann sum of int_0^1 (1-x) x^{-u} dx.
inline double riemann_partial_sum(double u, std::size_t n) {
    const auto nn = static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double x = static_cast<double>(j) / nn;
        acc += (1.0 - x) * std::pow(x, -u);
    }
    return acc / nn;
}

/// int_0^1 (1-x) x^{-u} dx = 1/((1-u)(2-u)), u < 1.
inline double riemann_limit(double u) { return 1.0 / ((1.0 - u) * (2.0 - u)); }

/// Target exponent of Var(S_N) for the MP process: 3 - 1/s.
inline double partial_sum_exponent_for_s(double s) { return 3.0 - 1.0 / s; }

struct ScalingFit {
    double exponent = 0.0;  // slope of ln Var(S_N) on ln N
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::size_t> grid;
    std::vector<double> variances;
};

inline double sample_variance(std::span<const double> v) {
    detail::require(v.size() >= 2, "sample variance needs two values");
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(v.size() - 1);
}

/**
 * Across-replication variance of S_N for each N in the grid, then a log-log
 * fit. `draw(n, seed, stream)` returns one series of length n; each (N, rep)
 * pair gets its own stream.
 */
template <class Draw>
ScalingFit scaling_exponent(Draw&& draw, std::span<const std::size_t> grid, std::size_t reps, std::uint64_t seed) {
    detail::require(grid.size() >= 4, "scaling fit needs at least 4 grid points");
    detail::require(reps >= 50, "scaling fit needs at least 50 replications");
    for (std::size_t i = 1; i < grid.size(); ++i) detail::require(grid[i] > grid[i - 1], "grid must be strictly increasing");
    ScalingFit fit;
    fit.grid.assign(grid.begin(), grid.end());
    std::vector<double> xs, ys, sums(reps);
    for (std::size_t n : grid) {
        for (std::size_t r = 0; r < reps; ++r) {
            const std::vector<double> x = draw(n, seed, derive_stream({0x5053ULL, n, r}));
            double acc = 0.0;
            for (double v : x) acc += v;
            sums[r] = acc;
        }
        const double var = sample_variance(sums);
        detail::require(var > 0.0, "partial sums have zero variance");
        fit.variances.push_back(var);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(var));
    }
    const auto line = ols_slope(xs, ys);
    fit.exponent = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    return fit;
}

inline ScalingFit scaling_exponent(const SeriesSource& source, std::span<const std::size_t> grid, std::size_t reps,
                                   std::uint64_t seed) {
    return scaling_exponent(
        [&source](std::size_t n, std::uint64_t sd, StreamId st) { return source.generate(n, sd, st).values; }, grid,
        reps, seed);
}

}  // namespace mplm
