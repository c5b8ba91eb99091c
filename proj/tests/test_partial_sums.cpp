#include <gtest/gtest.h>

#include "mplm/partial_sums.hpp"

using namespace mplm;

namespace {

// Two-state chain on {0,1}: P(0->1) = a, P(1->0) = b, started stationary.
struct TwoState {
    double a, b;
    double p1() const { return a / (a + b); }
    double acv(std::size_t h) const { return p1() * (1.0 - p1()) * std::pow(1.0 - a - b, static_cast<double>(h)); }
};

// Var(X_0 + ... + X_{N-1}) from the exact joint law of (state, running sum).
double exact_sum_variance(const TwoState& c, std::size_t n) {
    std::vector<double> p0(n + 1), p1(n + 1), q0(n + 1), q1(n + 1);
    p0[0] = 1.0 - c.p1();  // X_0 = 0, sum 0
    p1[1] = c.p1();        // X_0 = 1, sum 1
    for (std::size_t t = 1; t < n; ++t) {
        std::fill(q0.begin(), q0.end(), 0.0);
        std::fill(q1.begin(), q1.end(), 0.0);
        for (std::size_t s = 0; s <= t; ++s) {
            q0[s] += p0[s] * (1.0 - c.a) + p1[s] * c.b;
            q1[s + 1] += p0[s] * c.a + p1[s] * (1.0 - c.b);
        }
        p0.swap(q0);
        p1.swap(q1);
    }
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s <= n; ++s) {
        const double w = p0[s] + p1[s];
        m1 += w * static_cast<double>(s);
        m2 += w * static_cast<double>(s) * static_cast<double>(s);
    }
    return m2 - m1 * m1;
}

double double_sum(std::span<const double> g, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc += g[i > j ? i - j : j - i];
    return acc;
}

}  // namespace

TEST(VarPartialSum, WhiteNoise) {
    std::vector<double> g(50, 0.0);
    g[0] = 1.0;
    for (std::size_t n = 1; n <= 50; ++n) EXPECT_DOUBLE_EQ(var_partial_sum(g, n), static_cast<double>(n));
}

TEST(VarPartialSum, GeometricHandExample) {
    const std::vector<double> g{1.0, 0.5, 0.25};
    EXPECT_DOUBLE_EQ(var_partial_sum(g, 3), 5.5);
}

TEST(VarPartialSum, InsufficientLags) {
    const std::vector<double> g{1.0, 0.5};
    EXPECT_THROW(var_partial_sum(g, 3), ValidationError);
    EXPECT_THROW(var_partial_sum(g, 0), ValidationError);
}

TEST(VarPartialSum, TwoStateChainExact) {
    for (TwoState c : {TwoState{0.3, 0.6}, TwoState{0.05, 0.1}, TwoState{0.9, 0.8}}) {
        std::vector<double> g(64);
        for (std::size_t h = 0; h < 64; ++h) g[h] = c.acv(h);
        for (std::size_t n = 1; n <= 64; ++n) {
            const double oracle = exact_sum_variance(c, n);
            EXPECT_NEAR(var_partial_sum(g, n), oracle, 1e-10 * oracle) << n;
        }
    }
}

TEST(VarPartialSum, DoubleSumOracle) {
    CounterRng rng(4);
    std::vector<double> x(300);
    for (auto& v : x) v = rng.uniform_open();
    const auto acv = sample_acv(x, 255);
    for (std::size_t n : {1u, 2u, 17u, 100u, 256u}) {
        const double d = double_sum(acv.values, n);
        EXPECT_NEAR(var_partial_sum(acv, n), d, 1e-10 * std::abs(d)) << n;
    }
}

TEST(VarPartialSum, MonotoneForNonnegativeAcv) {
    std::vector<double> g(200);
    for (std::size_t h = 0; h < 200; ++h) g[h] = std::pow(static_cast<double>(h + 1), -0.4);
    double prev = 0.0;
    for (std::size_t n = 1; n <= 200; ++n) {
        const double v = var_partial_sum(g, n);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Riemann, ConvergesToClosedForm) {
    for (double u : {0.2, 0.25, 0.5}) {
        const double limit = riemann_limit(u);
        EXPECT_NEAR(riemann_partial_sum(u, 100000), limit, 0.01 * limit) << u;
    }
}

TEST(Riemann, ClosedFormByQuadrature) {
    // int_0^1 (1-x) x^{-u} dx with substitution x = y^{1/(1-u)} removes the singularity.
    const double u = 0.3;
    const double p = 1.0 / (1.0 - u);
    double acc = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) / n;
        acc += (1.0 - std::pow(y, p)) * p / n;
    }
    EXPECT_NEAR(acc, riemann_limit(u), 1e-8);
}

TEST(ScalingTarget, BoundaryAndMp) {
    EXPECT_DOUBLE_EQ(partial_sum_exponent_for_s(0.5), 1.0);
    EXPECT_DOUBLE_EQ(partial_sum_exponent_for_s(0.8), 1.75);
}

TEST(Scaling, Validation) {
    const auto gen = [](std::size_t n, std::uint64_t, StreamId) { return std::vector<double>(n, 0.0); };
    const std::vector<std::size_t> short_grid{8, 16, 32};
    EXPECT_THROW(scaling_exponent(gen, short_grid, 100, 1), ValidationError);
    const std::vector<std::size_t> grid{8, 16, 32, 64};
    EXPECT_THROW(scaling_exponent(gen, grid, 10, 1), ValidationError);
    const std::vector<std::size_t> unsorted{8, 32, 16, 64};
    EXPECT_THROW(scaling_exponent(gen, unsorted, 100, 1), ValidationError);
}

TEST(Scaling, IidBernoulliIsDiffusive) {
    const auto gen = [](std::size_t n, std::uint64_t seed, StreamId stream) {
        CounterRng rng(seed, stream);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform_open() < 0.3 ? 1.0 : 0.0;
        return x;
    };
    const std::vector<std::size_t> grid{1024, 2048, 4096, 8192, 16384};
    const auto fit = scaling_exponent(gen, grid, 400, 9);
    EXPECT_NEAR(fit.exponent, 1.0, 0.05);
    ASSERT_EQ(fit.variances.size(), grid.size());
    EXPECT_NEAR(fit.variances[0], 1024 * 0.21, 0.25 * 1024 * 0.21);
}
