#pragma once

/**
 * @file dynamics.hpp
 * Binary time series from intermittent interval maps.
 *
 * Three generators share one output type:
 *  - the Manneville-Pomeau map  T_s(x) = x + x^{1+s} (mod 1),
 *  - its linear-by-part approximation T_gamma (cells accumulating at 0,
 *    with lengths proportional to (k+1)^{-gamma}),
 *  - the renewal Markov chain on {0, 1, 2, ...} that counts down to 0 and
 *    from 0 jumps to n with probability (n+1)^{-gamma} / zeta(gamma).
 *
 * A value s of the first model behaves like gamma = 1 + 1/s in the others.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/rng.hpp"
#include "mplm/zeta.hpp"

namespace mplm {

enum class MapKind { MannevillePomeau, LinearByPart, MarkovChain };

inline const char* to_string(MapKind k) {
    switch (k) {
        case MapKind::MannevillePomeau: return "mp";
        case MapKind::LinearByPart: return "lbp";
        case MapKind::MarkovChain: return "markov";
    }
    return "?";
}

inline double gamma_from_s(double s) { return 1.0 + 1.0 / s; }
inline double s_from_gamma(double gamma) { return 1.0 / (gamma - 1.0); }

/// Model selector. MP uses s; LBP and the chain use gamma.
struct MapParams {
    MapKind kind = MapKind::MannevillePomeau;
    double s = 0.0;
    double gamma = 0.0;

    static MapParams manneville_pomeau(double s) {
        detail::require(std::isfinite(s) && s > 0.0, "s must be finite and > 0");
        return {MapKind::MannevillePomeau, s, gamma_from_s(s)};
    }
    static MapParams linear_by_part(double gamma) {
        detail::require(std::isfinite(gamma) && gamma > 2.0, "gamma must be finite and > 2");
        return {MapKind::LinearByPart, s_from_gamma(gamma), gamma};
    }
    static MapParams markov_chain(double gamma) {
        detail::require(std::isfinite(gamma) && gamma > 2.0, "gamma must be finite and > 2");
        return {MapKind::MarkovChain, s_from_gamma(gamma), gamma};
    }
};

/// Open interval (lo, hi) inside [0, 1]; the observable is its indicator.
struct Interval {
    double lo = 0.1;
    double hi = 0.9;

    bool contains(double x) const { return lo < x && x < hi; }
};

struct ObservableSpec {
    Interval interval;
    bool centered = true;  // subtract the empirical mean before analysis
};

inline void validate(const ObservableSpec& o) {
    const auto& a = o.interval;
    detail::require(std::isfinite(a.lo) && std::isfinite(a.hi), "interval bounds must be finite");
    detail::require(0.0 <= a.lo && a.lo < a.hi && a.hi <= 1.0, "interval must satisfy 0 <= lo < hi <= 1");
}

/// Iterations after which a run of identical iterates is reported as a stall.
inline constexpr std::uint64_t kStallThreshold = 10'000;
inline constexpr std::uint64_t kDefaultBurnIn = 10'000;

struct SeriesDiagnostics {
    std::uint64_t longest_constant_run = 0;  // consecutive identical map iterates
    bool stalled = false;                    // longest_constant_run >= kStallThreshold
};

struct BinarySeries {
    std::vector<double> values;
    MapParams params;
    ObservableSpec observable;
    std::uint64_t seed = 0;
    std::uint64_t burn_in = 0;
    StreamId stream;
    SeriesDiagnostics diagnostics;

    std::size_t size() const { return values.size(); }
    std::span<const double> view() const { return values; }
};

// ---------------------------------------------------------------------------
// Manneville-Pomeau

namespace detail {
inline double mp_step_unchecked(double s, double x) {
    const double y = x + std::pow(x, 1.0 + s);
    return y <= 1.0 ? y : y - 1.0;
}

class StallTracker {
public:
    void observe(double prev, double next) {
        run_ = (next == prev) ? run_ + 1 : 0;
        if (run_ > diag_.longest_constant_run) diag_.longest_constant_run = run_;
    }
    SeriesDiagnostics finish() {
        diag_.stalled = diag_.longest_constant_run >= kStallThreshold;
        return diag_;
    }

private:
    std::uint64_t run_ = 0;
    SeriesDiagnostics diag_;
};
}  // namespace detail

inline double mp_step(double s, double x) {
    detail::require(std::isfinite(s) && s > 0.0, "s must be finite and > 0");
    detail::require(std::isfinite(x) && x >= 0.0 && x <= 1.0, "x must lie in [0, 1]");
    return detail::mp_step_unchecked(s, x);
}

/// The p in (0,1) with p + p^{1+s} = 1, separating the two full branches.
inline double mp_branch_point(double s) {
    detail::require(std::isfinite(s) && s > 0.0, "s must be finite and > 0");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (mid + std::pow(mid, 1.0 + s) < 1.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// X_t = I_A(T_s^t(x)) for t = 0..n-1, x = T_s^{burn_in}(x_0), x_0 ~ U(0,1).
inline BinarySeries simulate_mp(double s, std::size_t n, std::uint64_t seed, std::uint64_t burn_in = kDefaultBurnIn,
                                const ObservableSpec& observable = {}, StreamId stream = {}) {
    auto params = MapParams::manneville_pomeau(s);
    detail::require(n >= 1, "series length must be >= 1");
    validate(observable);

    CounterRng rng(seed, stream);
    detail::StallTracker stall;
    double x = rng.uniform_open();
    for (std::uint64_t i = 0; i < burn_in; ++i) {
        const double next = detail::mp_step_unchecked(s, x);
        stall.observe(x, next);
        x = next;
    }
    BinarySeries out{std::vector<double>(n), params, observable, seed, burn_in, stream, {}};
    for (std::size_t t = 0; t < n; ++t) {
        out.values[t] = observable.interval.contains(x) ? 1.0 : 0.0;
        const double next = detail::mp_step_unchecked(s, x);
        stall.observe(x, next);
        x = next;
    }
    out.diagnostics = stall.finish();
    return out;
}

// ---------------------------------------------------------------------------
// Linear-by-part approximation

/**
 * Piecewise-affine map on [0,1]. With b_k = sum_{n>k} n^{-gamma} / zeta(gamma)
 * the cells are M_k = (b_{k+1}, b_k), so M_0 = (1 - 1/zeta, 1). M_0 is
 * stretched onto (0,1) with slope zeta; M_k (k >= 1) is mapped affinely onto
 * M_{k-1} with slope ((k+1)/k)^gamma, which makes the left branch
 * continuous with T(0) = 0 and T(b_1^-) = 1.
 *
 * Construction sums zeta once; reuse one instance across replications.
 */
class LinearByPartMap {
public:
    explicit LinearByPartMap(double gamma) : gamma_(checked(gamma)), tail_(gamma) {}

    double gamma() const { return gamma_; }
    double zeta() const { return tail_.zeta(); }

    /// Right endpoint b_k of cell M_k (b_0 = 1).
    double boundary(std::uint64_t k) const { return k == 0 ? 1.0 : tail_.tail(k + 1) / tail_.zeta(); }
    double cell_length(std::uint64_t k) const {
        return std::pow(static_cast<double>(k + 1), -gamma_) / tail_.zeta();
    }
    double slope(std::uint64_t k) const {
        return k == 0 ? tail_.zeta() : std::pow((static_cast<double>(k) + 1.0) / static_cast<double>(k), gamma_);
    }

    /// Index k of the cell containing x in (0, 1]; x in (b_{k+1}, b_k].
    std::uint64_t cell_of(double x) const { return tail_.invert(x * tail_.zeta()) - 1; }

    double operator()(double x) const {
        detail::require(std::isfinite(x) && x >= 0.0 && x <= 1.0, "x must lie in [0, 1]");
        return step_unchecked(x);
    }

    double step_unchecked(double x) const {
        if (x <= 0.0) return 0.0;
        const std::uint64_t k = cell_of(x);
        if (k == 0) return std::min(1.0, (x - boundary(1)) * tail_.zeta());
        const double y = boundary(k) + (x - boundary(k + 1)) * slope(k);
        return std::min(y, boundary(k - 1));
    }

private:
    static double checked(double gamma) {
        detail::require(std::isfinite(gamma) && gamma > 2.0, "gamma must be finite and > 2");
        return gamma;
    }

    double gamma_;
    PowerTail tail_;
};

/// One step of the linear-by-part map. Builds the map each call; prefer
/// LinearByPartMap when iterating.
inline double lbp_step(double gamma, double x) { return LinearByPartMap(gamma)(x); }

inline BinarySeries simulate_lbp(const LinearByPartMap& map, std::size_t n, std::uint64_t seed,
                                 std::uint64_t burn_in = kDefaultBurnIn, const ObservableSpec& observable = {},
                                 StreamId stream = {}) {
    detail::require(n >= 1, "series length must be >= 1");
    validate(observable);
    CounterRng rng(seed, stream);
    detail::StallTracker stall;
    double x = rng.uniform_open();
    for (std::uint64_t i = 0; i < burn_in; ++i) {
        const double next = map.step_unchecked(x);
        stall.observe(x, next);
        x = next;
    }
    BinarySeries out{std::vector<double>(n), MapParams::linear_by_part(map.gamma()), observable, seed, burn_in, stream,
                     {}};
    for (std::size_t t = 0; t < n; ++t) {
        out.values[t] = observable.interval.contains(x) ? 1.0 : 0.0;
        const double next = map.step_unchecked(x);
        stall.observe(x, next);
        x = next;
    }
    out.diagnostics = stall.finish();
    return out;
}

inline BinarySeries simulate_lbp(double gamma, std::size_t n, std::uint64_t seed,
                                 std::uint64_t burn_in = kDefaultBurnIn, const ObservableSpec& observable = {},
                                 StreamId stream = {}) {
    return simulate_lbp(LinearByPartMap(gamma), n, seed, burn_in, observable, stream);
}

// ---------------------------------------------------------------------------
// Renewal Markov chain

/**
 * Chain with P(n, n-1) = 1 for n > 0 and P(0, n) = (n+1)^{-gamma} / zeta(gamma).
 * Its stationary law is pi(k) = sum_{n > k} n^{-gamma} / zeta(gamma - 1),
 * i.e. the renewal age distribution for inter-arrival law zeta(gamma).
 */
class RenewalChain {
public:
    explicit RenewalChain(double gamma) : gamma_(checked(gamma)), jump_(gamma), size_biased_(gamma - 1.0) {}

    double gamma() const { return gamma_; }

    double stationary(std::uint64_t k) const { return jump_.tail(k + 1) / size_biased_.zeta(); }
    double jump_probability(std::uint64_t n) const {
        return std::pow(static_cast<double>(n + 1), -gamma_) / jump_.zeta();
    }

    /// Next state from 0, by inverse CDF on the survival function.
    template <class Rng>
    std::uint64_t sample_jump(Rng& rng) const {
        return jump_.invert(rng.uniform_open() * jump_.zeta()) - 1;
    }

    /// Draw from the stationary law: a size-biased renewal length J ~ j^{1-gamma},
    /// then a uniform position inside it.
    template <class Rng>
    std::uint64_t sample_stationary(Rng& rng) const {
        const std::uint64_t j = size_biased_.invert(rng.uniform_open() * size_biased_.zeta());
        const auto pos = static_cast<std::uint64_t>(rng.uniform_open() * static_cast<double>(j));
        return std::min(pos, j - 1);
    }

private:
    static double checked(double gamma) {
        detail::require(std::isfinite(gamma) && gamma > 2.0,
                        "gamma must be > 2 (the stationary law needs zeta(gamma - 1) < inf)");
        return gamma;
    }

    double gamma_;
    PowerTail jump_;
    PowerTail size_biased_;
};

/// pi(k) for the renewal chain.
inline double markov_stationary(double gamma, std::uint64_t k) { return RenewalChain(gamma).stationary(k); }

/// Y_t = 1 - I_{0}(Z_t).
inline std::vector<double> markov_labels(std::span<const std::uint64_t> states) {
    std::vector<double> y(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) y[i] = states[i] == 0 ? 0.0 : 1.0;
    return y;
}

/// Stationary state path Z_0..Z_{n-1}.
inline std::vector<std::uint64_t> simulate_markov_states(const RenewalChain& chain, std::size_t n, std::uint64_t seed,
                                                         StreamId stream = {}) {
    detail::require(n >= 1, "series length must be >= 1");
    CounterRng rng(seed, stream);
    std::vector<std::uint64_t> z(n);
    std::uint64_t state = chain.sample_stationary(rng);
    for (std::size_t t = 0; t < n; ++t) {
        z[t] = state;
        state = state > 0 ? state - 1 : chain.sample_jump(rng);
    }
    return z;
}

inline BinarySeries simulate_markov(const RenewalChain& chain, std::size_t n, std::uint64_t seed,
                                    StreamId stream = {}) {
    const auto z = simulate_markov_states(chain, n, seed, stream);
    BinarySeries out{markov_labels(z), MapParams::markov_chain(chain.gamma()), {}, seed, 0, stream, {}};
    return out;
}

inline BinarySeries simulate_markov(double gamma, std::size_t n, std::uint64_t seed, StreamId stream = {}) {
    return simulate_markov(RenewalChain(gamma), n, seed, stream);
}

}  // namespace mplm
