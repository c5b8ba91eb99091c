#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "mplm/io.hpp"
#include "mplm/montecarlo.hpp"

using namespace mplm;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.name = "small";
    spec.s_values = {0.6, 0.8};
    spec.n_values = {1024, 2048};
    spec.methods = {Method::Perio, Method::Varmp, Method::WmpHaar};
    spec.reps = 6;
    spec.seed = 123;
    spec.burn_in = 500;
    return spec;
}

std::string report(const std::vector<McSummary>& rows) {
    std::ostringstream os;
    write_summary_csv(os, rows);
    return os.str();
}

}  // namespace

TEST(Summarize, TwoValues) {
    const std::vector<double> v{0.5, 0.7};
    const auto s = summarize(v, 0.6);
    EXPECT_NEAR(s.mean, 0.6, 1e-15);
    EXPECT_NEAR(s.sd, 0.141421, 1e-6);
    EXPECT_NEAR(s.mse, 0.02, 1e-12);
}

TEST(Summarize, AllEqualToTruth) {
    const std::vector<double> v(5, 0.65);
    const auto s = summarize(v, 0.65);
    EXPECT_DOUBLE_EQ(s.mean, 0.65);
    EXPECT_EQ(s.sd, 0.0);
    EXPECT_EQ(s.mse, 0.0);
}

TEST(Summarize, SingleValue) {
    const std::vector<double> v{0.9};
    const auto s = summarize(v, 0.8);
    EXPECT_EQ(s.sd, 0.0);
    EXPECT_NEAR(s.mse, 0.01, 1e-15);
}

TEST(Summarize, EmptyIsError) { EXPECT_THROW(summarize({}, 0.5), ValidationError); }

TEST(Summarize, PublishedRowIdentity) {
    // mean 0.6545, sd 0.1394 at s = 0.6
    const double bias = 0.6545 - 0.6, sd = 0.1394;
    EXPECT_NEAR(bias * bias + sd * sd, 0.0223, 0.0005);
}

TEST(Streams, UniqueAcrossCells) {
    std::set<std::uint64_t> seen;
    std::size_t count = 0;
    for (double s : {0.35, 0.4, 0.45, 0.6, 0.65, 0.8, 1.0, 1.1, 1.2, 1.3})
        for (std::size_t n : {8192u, 10000u, 16384u, 20000u, 30000u, 32768u})
            for (Method m : kAllMethods)
                for (std::size_t r = 0; r < 200; ++r, ++count) seen.insert(replication_stream(s, n, m, r).value);
    EXPECT_EQ(seen.size(), count);
}

TEST(RunExperiment, RowOrderAndMseIdentity) {
    const auto spec = small_spec();
    const auto rows = run_experiment(spec, {.threads = 1});
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0].s, 0.6);
    EXPECT_EQ(rows[0].n, 1024u);
    EXPECT_EQ(rows[0].method, Method::Perio);
    EXPECT_EQ(rows[1].method, Method::Varmp);
    EXPECT_EQ(rows[3].n, 2048u);
    EXPECT_EQ(rows[6].s, 0.8);
    for (const auto& r : rows) {
        ASSERT_FALSE(r.failed);
        EXPECT_GE(r.sd_s_hat, 0.0);
        const double bias = r.mean_s_hat - r.s;
        EXPECT_NEAR(r.mse_s_hat, bias * bias + r.sd_s_hat * r.sd_s_hat, 1e-12);
        EXPECT_EQ(r.valid_count + r.invalid_count, spec.reps);
    }
}

TEST(RunExperiment, IndependentOfThreadCount) {
    const auto spec = small_spec();
    const auto one = report(run_experiment(spec, {.threads = 1}));
    EXPECT_EQ(one, report(run_experiment(spec, {.threads = 3})));
    EXPECT_EQ(one, report(run_experiment(spec, {.threads = 8})));
}

TEST(RunExperiment, ReplicationMatchesStandaloneEstimate) {
    auto spec = small_spec();
    spec.reps = 1;
    spec.s_values = {0.8};
    spec.n_values = {2048};
    spec.methods = {Method::Perio};
    const auto rows = run_experiment(spec, {.threads = 1});
    const auto x = simulate_mp(0.8, 2048, spec.seed, spec.burn_in, {}, replication_stream(0.8, 2048, Method::Perio, 0));
    EXPECT_DOUBLE_EQ(rows[0].mean_s_hat, perio_estimate(x.values).s_hat);
    EXPECT_EQ(rows[0].sd_s_hat, 0.0);
}

TEST(RunExperiment, FailedCellWhenMostlyInvalid) {
    ExperimentSpec spec;
    spec.s_values = {0.8};
    spec.n_values = {1024};
    spec.methods = {Method::Varmp};
    spec.reps = 4;
    spec.observable.interval = {0.0, 1.0};  // constant series: zero block variance
    const auto rows = run_experiment(spec, {.threads = 2});
    EXPECT_TRUE(rows[0].failed);
    EXPECT_EQ(rows[0].invalid_count, 4u);
    EXPECT_FALSE(rows[0].first_invalid_reason.empty());
    EXPECT_TRUE(std::isnan(rows[0].mean_s_hat));
}

TEST(RunExperiment, OtherModels) {
    auto spec = small_spec();
    spec.s_values = {0.7};
    spec.methods = {Method::Perio};
    spec.reps = 3;
    for (MapKind k : {MapKind::LinearByPart, MapKind::MarkovChain}) {
        spec.model = k;
        const auto rows = run_experiment(spec, {.threads = 2});
        for (const auto& r : rows) EXPECT_FALSE(r.failed);
    }
}

TEST(RunExperiment, Validation) {
    auto spec = small_spec();
    spec.reps = 0;
    EXPECT_THROW(run_experiment(spec), ValidationError);
    spec = small_spec();
    spec.methods.clear();
    EXPECT_THROW(run_experiment(spec), ValidationError);
    spec = small_spec();
    spec.model = MapKind::LinearByPart;
    spec.s_values = {1.1};
    EXPECT_THROW(run_experiment(spec), ValidationError);
    spec = small_spec();
    spec.n_values = {10};
    EXPECT_THROW(run_experiment(spec), ValidationError);
}

// ---------------------------------------------------------------------------

TEST(Presets, PublishedLayouts) {
    const auto t51 = find_preset("table51");
    ASSERT_TRUE(t51);
    EXPECT_EQ(t51->spec.s_values.size() * t51->spec.n_values.size() * t51->spec.methods.size(), 36u);
    EXPECT_EQ(t51->spec.reps, 200u);
    const auto t53 = find_preset("table53");
    ASSERT_TRUE(t53);
    EXPECT_EQ(t53->spec.reps, 50u);
    EXPECT_TRUE(t53->power_of_two_sizes);
    const auto t54 = find_preset("table54");
    ASSERT_TRUE(t54);
    EXPECT_EQ(t54->spec.burn_in, 0u);
    EXPECT_EQ(find_preset("table71")->spec.methods.size(), 2u);
    EXPECT_EQ(find_preset("table52")->spec.s_values, std::vector<double>{0.8});
    EXPECT_FALSE(find_preset("table99"));
}

TEST(Presets, Scaling) {
    const auto t51 = *find_preset("table51");
    EXPECT_EQ(scaled(t51, 0.25).reps, 50u);
    EXPECT_EQ(scaled(t51, 0.25).n_values, t51.spec.n_values);
    EXPECT_EQ(scaled(t51, 0.001).reps, 1u);
    EXPECT_EQ(scaled(t51, 0.5, true).n_values, (std::vector<std::size_t>{5000, 10000, 15000}));
    const auto t53 = *find_preset("table53");
    EXPECT_EQ(scaled(t53, 0.3, true).n_values, (std::vector<std::size_t>{2048, 4096, 8192}));
    EXPECT_THROW(scaled(t51, 0.0), ValidationError);
    EXPECT_THROW(scaled(t51, 1.5), ValidationError);
}
