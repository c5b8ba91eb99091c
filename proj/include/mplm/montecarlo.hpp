#pragma once

/**
 * @file montecarlo.hpp
 * Replication engine for estimator studies.
 *
 * Replication r of cell (s, N, method) draws its series from the stream
 * derive_stream({s, N, method, r}) under the base seed, so results do not
 * depend on scheduling or on the number of worker threads.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/estimators.hpp"
#include "mplm/model.hpp"

namespace mplm {

struct ExperimentSpec {
    std::string name = "experiment";
    std::vector<double> s_values;
    std::vector<std::size_t> n_values;
    std::vector<Method> methods;
    std::size_t reps = 200;
    std::uint64_t seed = 20070710;
    MapKind model = MapKind::MannevillePomeau;
    ObservableSpec observable;
    std::uint64_t burn_in = kDefaultBurnIn;
    EstimatorConfig estimator;
};

inline void validate(const ExperimentSpec& spec) {
    detail::require(spec.reps >= 1, "replications must be >= 1");
    detail::require(!spec.s_values.empty(), "no s values");
    detail::require(!spec.n_values.empty(), "no sample sizes");
    detail::require(!spec.methods.empty(), "no methods");
    for (double s : spec.s_values) {
        detail::require(std::isfinite(s) && s > 0.0, "s values must be positive");
        if (spec.model != MapKind::MannevillePomeau)
            detail::require(s < 1.0, "lbp/markov models need s < 1 (gamma = 1 + 1/s > 2)");
    }
    for (std::size_t n : spec.n_values) detail::require(n >= 64, "sample sizes must be >= 64");
    validate(spec.observable);
    // Length requirements differ per estimator; a dry run on a non-constant
    // series surfaces them before any replication is spent.
    for (std::size_t n : spec.n_values) {
        std::vector<double> probe(n);
        for (std::size_t t = 0; t < n; ++t) probe[t] = static_cast<double>((t * t / 3) % 2);
        for (Method m : spec.methods) {
            try {
                (void)estimate(m, probe, spec.estimator);
            } catch (const ValidationError& e) {
                throw ValidationError(std::string(to_string(m)) + " at N=" + std::to_string(n) + ": " + e.what());
            }
        }
    }
}

struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double mse = 0.0;
};

/// mean, sample sd (divisor R-1; 0 when R = 1), and mse = (mean - s)^2 + sd^2.
inline Summary summarize(std::span<const double> values, double true_s) {
    detail::require(!values.empty(), "summarize needs at least one value");
    Summary out;
    out.mean = mean_of(values);
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.mse = (out.mean - true_s) * (out.mean - true_s) + out.sd * out.sd;
    return out;
}

struct McSummary {
    double s = 0.0;
    std::size_t n = 0;
    Method method = Method::Perio;
    double mean_s_hat = std::nan("");
    double sd_s_hat = std::nan("");
    double mse_s_hat = std::nan("");
    std::size_t valid_count = 0;
    std::size_t invalid_count = 0;
    bool failed = false;  // more than half of the replications invalid
    std::string first_invalid_reason;
};

inline StreamId replication_stream(double s, std::size_t n, Method method, std::size_t rep) {
    return derive_stream({bits_of(s), n, static_cast<std::uint64_t>(method) + 1, rep});
}

struct RunOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

struct Replicate {
    bool valid = false;
    double s_hat = 0.0;
    std::string reason;
};

}  // namespace detail

/// Runs every (s, N, method) cell; rows come back ordered by s, then N, then method.
inline std::vector<McSummary> run_experiment(const ExperimentSpec& spec, RunOptions opt = {}) {
    validate(spec);
    std::vector<SeriesSource> sources;
    for (double s : spec.s_values) {
        ModelSpec model = model_for_s(spec.model, s);
        model.burn_in = spec.burn_in;
        model.observable = spec.observable;
        sources.emplace_back(model);
    }

    const std::size_t per_s = spec.n_values.size() * spec.methods.size();
    const std::size_t cells = spec.s_values.size() * per_s;
    const std::size_t tasks = cells * spec.reps;
    std::vector<detail::Replicate> out(tasks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            const std::size_t cell = task / spec.reps;
            const std::size_t rep = task % spec.reps;
            const std::size_t si = cell / per_s;
            const std::size_t ni = (cell % per_s) / spec.methods.size();
            const Method method = spec.methods[cell % spec.methods.size()];
            try {
                const double s = spec.s_values[si];
                const std::size_t n = spec.n_values[ni];
                const auto series = sources[si].generate(n, spec.seed, replication_stream(s, n, method, rep));
                const auto r = estimate(method, series.values, spec.estimator);
                out[task] = {r.valid, r.s_hat, r.reason};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = tasks;
            }
        }
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    std::vector<McSummary> rows;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        McSummary row;
        row.s = spec.s_values[cell / per_s];
        row.n = spec.n_values[(cell % per_s) / spec.methods.size()];
        row.method = spec.methods[cell % spec.methods.size()];
        std::vector<double> values;
        for (std::size_t rep = 0; rep < spec.reps; ++rep) {
            const auto& r = out[cell * spec.reps + rep];
            if (r.valid) {
                values.push_back(r.s_hat);
            } else {
                ++row.invalid_count;
                if (row.first_invalid_reason.empty()) row.first_invalid_reason = r.reason;
            }
        }
        row.valid_count = values.size();
        row.failed = 2 * row.invalid_count > spec.reps;
        if (!row.failed && !values.empty()) {
            const auto sm = summarize(values, row.s);
            row.mean_s_hat = sm.mean;
            row.sd_s_hat = sm.sd;
            row.mse_s_hat = sm.mse;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Presets mirroring the published study layout.

struct Preset {
    ExperimentSpec spec;
    bool power_of_two_sizes = false;  // wavelet tables need N = 2^m
};

inline std::optional<Preset> find_preset(std::string_view name) {
    const std::vector<Method> long_memory{Method::Perio, Method::Parzen, Method::Cos1,
                                          Method::Cos2,  Method::Varmp,  Method::Vpmp};
    const std::vector<Method> wavelets{Method::WmpHaar, Method::WmpMexicanHat};
    Preset p;
    p.spec.name = std::string(name);
    if (name == "table51") {
        p.spec.s_values = {0.60, 0.65};
        p.spec.n_values = {10000, 20000, 30000};
        p.spec.methods = long_memory;
        p.spec.reps = 200;
    } else if (name == "table52") {
        p.spec.s_values = {0.80};
        p.spec.n_values = {10000, 20000, 30000};
        p.spec.methods = long_memory;
        p.spec.reps = 200;
    } else if (name == "table53") {
        p.spec.s_values = {0.65, 0.80};
        p.spec.n_values = {8192, 16384, 32768};
        p.spec.methods = wavelets;
        p.spec.reps = 50;
        p.power_of_two_sizes = true;
    } else if (name == "table54") {
        p.spec.s_values = {1.0, 1.1, 1.2, 1.3};
        p.spec.n_values = {32768};
        p.spec.methods = wavelets;
        p.spec.reps = 50;
        p.spec.burn_in = 0;  // no invariant probability for s >= 1: start from the uniform draw
        p.power_of_two_sizes = true;
    } else if (name == "table71") {
        p.spec.s_values = {0.35, 0.40, 0.45};
        p.spec.n_values = {10000, 30000};
        p.spec.methods = {Method::P, Method::SP};
        p.spec.reps = 200;
    } else {
        return std::nullopt;
    }
    return p;
}

/// Shrinks replications by `factor` (at least one), and sample sizes too
/// when `scale_n` is set (rounded down to a power of two for wavelet tables).
inline ExperimentSpec scaled(const Preset& preset, double factor, bool scale_n = false) {
    detail::require(std::isfinite(factor) && factor > 0.0 && factor <= 1.0, "scale must lie in (0, 1]");
    ExperimentSpec spec = preset.spec;
    spec.reps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(spec.reps) * factor)));
    if (scale_n) {
        for (auto& n : spec.n_values) {
            auto scaled_n = std::max<std::size_t>(64, static_cast<std::size_t>(std::llround(static_cast<double>(n) * factor)));
            if (preset.power_of_two_sizes) scaled_n = std::size_t{1} << dyadic_levels(scaled_n);
            n = scaled_n;
        }
    }
    return spec;
}

}  // namespace mplm
