#pragma once

// Power-law tail sums  tail(j) = sum_{n >= j} n^{-e},  e > 1.
//
// Both the linear-by-part map (cell boundaries) and the renewal chain (jump
// law and stationary law) are built from these sums. Small j come from a
// table filled by backward summation; large j use the Euler-Maclaurin
// expansion of the remainder, which is accurate far beyond double
// precision once j exceeds a few thousand.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mplm/error.hpp"

namespace mplm {

/// Euler-Maclaurin remainder  sum_{n >= j} n^{-e}  for j >= 1 (accurate for large j).
inline double euler_maclaurin_tail(double e, double j) {
    const double p = std::pow(j, -e);
    return j * p / (e - 1.0) + 0.5 * p + e * p / (12.0 * j) - e * (e + 1.0) * (e + 2.0) * p / (720.0 * j * j * j);
}

/// Riemann zeta for real e > 1: direct summation to n = 10^6 plus the
/// Euler-Maclaurin remainder. Accurate well below 1e-10.
inline double riemann_zeta(double e) {
    detail::require(std::isfinite(e) && e > 1.0, "zeta exponent must be > 1");
    constexpr std::uint64_t kTerms = 1'000'000;
    double sum = euler_maclaurin_tail(e, static_cast<double>(kTerms + 1));
    for (std::uint64_t n = kTerms; n >= 1; --n) sum += std::pow(static_cast<double>(n), -e);
    return sum;
}

/// Tail sums and their inverse for a fixed exponent e > 1.
class PowerTail {
public:
    explicit PowerTail(double exponent, std::size_t table_size = 4096) : e_(exponent), tail_(table_size + 2) {
        detail::require(std::isfinite(exponent) && exponent > 1.0, "tail exponent must be > 1");
        detail::require(table_size >= 16, "tail table too small");
        const std::size_t k = table_size;
        tail_[k + 1] = euler_maclaurin_tail(e_, static_cast<double>(k + 1));
        for (std::size_t j = k; j >= 1; --j) tail_[j] = tail_[j + 1] + std::pow(static_cast<double>(j), -e_);
        tail_[0] = std::numeric_limits<double>::infinity();
    }

    double exponent() const { return e_; }
    double zeta() const { return tail_[1]; }
    std::uint64_t table_size() const { return tail_.size() - 2; }

    /// sum_{n >= j} n^{-e}, j >= 1.
    double tail(std::uint64_t j) const {
        if (j >= tail_.size()) return euler_maclaurin_tail(e_, static_cast<double>(j));
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Warray-bounds"  // GCC 11 misreads the guarded index after inlining
#endif
        return tail_[j];
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic pop
#endif
    }

    /// Largest j >= 1 with tail(j) >= v, for v in (0, zeta()].
    std::uint64_t invert(double v) const {
        if (v >= tail_[1]) return 1;
        const std::uint64_t k = table_size();
        if (v > tail_[k + 1]) {
            // tail_ is decreasing on [1, k+1]; find the last index with tail >= v.
            auto first = tail_.begin() + 1;
            auto last = tail_.begin() + static_cast<std::ptrdiff_t>(k + 2);
            auto it = std::partition_point(first, last, [v](double t) { return t >= v; });
            return static_cast<std::uint64_t>(it - tail_.begin()) - 1;
        }
        // Continuous inversion of the integral term, shifted by the half-term.
        const double guess = std::pow(v * (e_ - 1.0), -1.0 / (e_ - 1.0)) + 0.5;
        constexpr double kCap = 0x1.0p62;
        std::uint64_t j = guess >= kCap ? static_cast<std::uint64_t>(kCap) : static_cast<std::uint64_t>(guess);
        j = std::max<std::uint64_t>(j, k + 1);
        for (int it = 0; it < 64 && j > k + 1 && tail(j) < v; ++it) --j;
        for (int it = 0; it < 64 && tail(j + 1) >= v; ++it) ++j;
        return j;
    }

private:
    double e_;
    std::vector<double> tail_;  // tail_[j] for j = 1..k+1; tail_[0] unused
};

}  // namespace mplm
