// mplm: simulate intermittent-map series and estimate their memory parameter.
//
// Exit status: 0 success, 1 invalid input or usage, 2 runtime failure.
// Every option can also be set through MPLM_<OPTION> (upper case, dashes
// as underscores); command-line values win over the environment.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mplm/dynamics.hpp"
#include "mplm/estimators.hpp"
#include "mplm/io.hpp"
#include "mplm/model.hpp"
#include "mplm/montecarlo.hpp"
#include "mplm/partial_sums.hpp"
#include "mplm/spectral.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "1.0.0";

std::string env_name(const std::string& flag) {
    std::string out = "MPLM_";
    for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

template <class T>
CLI::Option* option(CLI::App* app, const std::string& name, T& value, const std::string& help) {
    return app->add_option("--" + name, value, help)->envname(env_name(name));
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& value, const std::string& help) {
    return app->add_flag("--" + name, value, help)->envname(env_name(name));
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

// Provenance record written next to each output.
struct Manifest {
    explicit Manifest(std::string name) : subcommand(std::move(name)) {}

    std::string subcommand;
    json parameters = json::object();
    std::optional<std::uint64_t> seed;
    std::string started = utc_now();
    std::chrono::steady_clock::time_point clock = std::chrono::steady_clock::now();
    json extra = json::object();

    json finish() const {
        json doc;
        doc["tool"] = "mplm";
        doc["version"] = kToolVersion;
        doc["subcommand"] = subcommand;
        doc["parameters"] = parameters;
        doc["seed"] = seed ? json(*seed) : json(nullptr);
        doc["rng"] = {{"name", mplm::kRngName}, {"version", mplm::kRngVersion}};
        doc["started_at"] = started;
        doc["finished_at"] = utc_now();
        doc["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
        for (const auto& [k, v] : extra.items()) doc[k] = v;
        return doc;
    }
};

struct Common {
    std::string manifest_path;  // empty: derive from --out, else stderr
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void emit_manifest(const Manifest& m, const Common& common, const std::string& out_path) {
    const std::string text = m.finish().dump(2) + "\n";
    if (!common.manifest_path.empty()) {
        write_text(common.manifest_path, text);
    } else if (!out_path.empty() && out_path != "-") {
        write_text(out_path + ".manifest.json", text);
    } else {
        std::cerr << text;
    }
}


std::vector<double> load_series(const std::string& path) {
    if (path.empty()) throw mplm::ValidationError("--in is required");
    return mplm::read_series_file(path);
}

json result_json(const mplm::EstimateResult& r) {
    json diag = json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = std::isfinite(v) ? json(v) : json(nullptr);
    json doc;
    doc["method"] = mplm::to_string(r.method);
    doc["s_hat"] = r.valid ? json(r.s_hat) : json(nullptr);
    doc["slope"] = std::isfinite(r.slope) ? json(r.slope) : json(nullptr);
    doc["points_used"] = r.points_used;
    doc["valid"] = r.valid;
    if (!r.valid) doc["reason"] = r.reason;
    doc["diagnostics"] = diag;
    return doc;
}

std::string json_number(double v) { return std::isfinite(v) ? mplm::format_double(v) : "nan"; }

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string model = "mp";
    std::optional<double> s, gamma;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::uint64_t burn_in = mplm::kDefaultBurnIn;
    std::string interval = "0.1,0.9";
    std::string out;
};

int run_simulate(const SimulateArgs& a, const Common& common) {
    Manifest m{"simulate"};
    const auto kind = mplm::parse_model(a.model);
    if (a.s.has_value() == a.gamma.has_value()) throw mplm::ValidationError("give exactly one of --s and --gamma");
    mplm::detail::require(a.n >= 1, "--n must be >= 1");
    mplm::ModelSpec spec;
    if (kind == mplm::MapKind::MannevillePomeau)
        spec.params = mplm::MapParams::manneville_pomeau(a.s ? *a.s : mplm::s_from_gamma(*a.gamma));
    else {
        const double g = a.gamma ? *a.gamma : mplm::gamma_from_s(*a.s);
        spec.params = kind == mplm::MapKind::LinearByPart ? mplm::MapParams::linear_by_part(g)
                                                          : mplm::MapParams::markov_chain(g);
    }
    spec.burn_in = a.burn_in;
    spec.observable.interval = mplm::parse_interval(a.interval);
    const mplm::SeriesSource source(spec);
    const auto series = source.generate(a.n, a.seed);
    if (series.diagnostics.stalled)
        std::cerr << "warning: orbit stalled for " << series.diagnostics.longest_constant_run
                  << " consecutive iterations (numerical underflow near the fixed point)\n";

    std::ostringstream os;
    mplm::write_series_csv(os, series.values);
    write_text(a.out, os.str());

    m.seed = a.seed;
    m.parameters = {{"model", a.model},
                    {"s", spec.params.s},
                    {"gamma", spec.params.gamma},
                    {"n", a.n},
                    {"burn_in", kind == mplm::MapKind::MarkovChain ? 0 : a.burn_in},
                    {"interval", {spec.observable.interval.lo, spec.observable.interval.hi}},
                    {"out", a.out.empty() ? "-" : a.out}};
    m.extra["diagnostics"] = {{"longest_constant_run", series.diagnostics.longest_constant_run},
                              {"stalled", series.diagnostics.stalled}};
    emit_manifest(m, common, a.out);
    return 0;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
    std::string in;
    std::string smooth = "none";
    std::optional<std::size_t> m;
    bool raw = false;
    std::string out;
};

int run_spectrum(const SpectrumArgs& a, const Common& common) {
    Manifest man{"spectrum"};
    const auto x = load_series(a.in);
    mplm::Periodogram p;
    std::size_t m = 0;
    if (a.smooth == "none") {
        if (a.m) throw mplm::ValidationError("--m applies only to smoothed spectra");
        p = mplm::periodogram(x, {.centered = !a.raw});
    } else {
        if (a.raw) throw mplm::ValidationError("--raw applies only to --smooth none");
        const auto kind = a.smooth == "parzen" ? mplm::LagWindow::Parzen : mplm::LagWindow::CosineBell;
        m = a.m.value_or(mplm::default_truncation(x.size()));
        p = mplm::smoothed_periodogram(x, {kind, m});
    }
    std::ostringstream os;
    mplm::write_periodogram_csv(os, p);
    write_text(a.out, os.str());
    man.parameters = {{"in", a.in},
                      {"n", x.size()},
                      {"smooth", a.smooth},
                      {"m", a.smooth == "none" ? json(nullptr) : json(m)},
                      {"centered", !a.raw},
                      {"out", a.out.empty() ? "-" : a.out}};
    emit_manifest(man, common, a.out);
    return 0;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string in;
    std::string method;
    bool json_out = false;
    std::size_t holder_freq = 1;
    bool holder_average = false;
    double varmp_theta = 0.7;
    bool raw = false;
    std::string out;
};

int run_estimate(const EstimateArgs& a, const Common& common) {
    Manifest man{"estimate"};
    const auto method = mplm::parse_method(a.method);
    if (!method) throw mplm::ValidationError("unknown method '" + a.method + "'");
    const auto x = load_series(a.in);
    mplm::EstimatorConfig cfg;
    cfg.holder_freq_index = a.holder_freq;
    cfg.holder_average = a.holder_average;
    cfg.varmp_theta = a.varmp_theta;
    cfg.centered = !a.raw;
    const auto r = mplm::estimate(*method, x, cfg);

    std::string text;
    if (a.json_out) {
        text = result_json(r).dump(2) + "\n";
    } else {
        text = "method,s_hat,slope,points_used\n" + std::string(mplm::to_string(r.method)) + "," +
               json_number(r.s_hat) + "," + json_number(r.slope) + "," + std::to_string(r.points_used) + "\n";
    }
    write_text(a.out, text);
    if (!r.valid) std::cerr << "warning: estimate invalid: " << r.reason << "\n";

    man.parameters = {{"in", a.in},          {"n", x.size()},
                      {"method", a.method},  {"holder_freq", a.holder_freq},
                      {"holder_average", a.holder_average}, {"varmp_theta", a.varmp_theta},
                      {"centered", !a.raw},  {"out", a.out.empty() ? "-" : a.out}};
    man.extra["result"] = result_json(r);
    emit_manifest(man, common, a.out);
    return 0;
}

// ---------------------------------------------------------------------------

struct MonteCarloArgs {
    std::string spec;
    std::string preset;
    std::optional<double> scale;
    bool scale_n = false;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string out_dir = ".";
};

int run_montecarlo(const MonteCarloArgs& a, const Common& common) {
    Manifest man{"montecarlo"};
    if (a.spec.empty() == a.preset.empty()) throw mplm::ValidationError("give exactly one of --spec and --preset");
    mplm::SpecFile file;
    if (!a.spec.empty()) {
        file = mplm::read_spec_file(a.spec);
    } else {
        const auto preset = mplm::find_preset(a.preset);
        if (!preset) throw mplm::ValidationError("unknown preset '" + a.preset + "'");
        file.spec = preset->spec;
        file.power_of_two_sizes = preset->power_of_two_sizes;
    }
    if (a.reps) file.spec.reps = *a.reps;
    if (a.seed) file.spec.seed = *a.seed;
    if (a.scale) file.scale = *a.scale;
    if (a.scale_n) file.scale_n = true;
    const auto spec = mplm::resolve(file);
    mplm::validate(spec);

    const auto rows = mplm::run_experiment(spec, {.threads = a.threads});

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + a.out_dir + "': " + ec.message());
    const std::string csv_path = (fs::path(a.out_dir) / (spec.name + ".csv")).string();
    std::ostringstream os;
    mplm::write_summary_csv(os, rows);
    write_text(csv_path, os.str());

    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (r.failed) {
            ++failed;
            std::cerr << "warning: cell s=" << mplm::format_double(r.s) << " N=" << r.n << " "
                      << mplm::to_string(r.method) << " failed (" << r.invalid_count << " invalid; "
                      << r.first_invalid_reason << ")\n";
        }
    }

    json methods = json::array();
    for (auto m : spec.methods) methods.push_back(mplm::to_string(m));
    man.seed = spec.seed;
    man.parameters = {{"name", spec.name},
                      {"spec", a.spec.empty() ? json(nullptr) : json(a.spec)},
                      {"preset", a.preset.empty() ? json(nullptr) : json(a.preset)},
                      {"scale", file.scale},
                      {"scale_n", file.scale_n},
                      {"s", spec.s_values},
                      {"n", spec.n_values},
                      {"methods", methods},
                      {"reps", spec.reps},
                      {"model", mplm::to_string(spec.model)},
                      {"burn_in", spec.burn_in},
                      {"interval", {spec.observable.interval.lo, spec.observable.interval.hi}},
                      {"threads", a.threads},
                      {"out_dir", a.out_dir}};
    man.extra["outputs"] = {csv_path};
    man.extra["rows"] = rows.size();
    man.extra["failed_cells"] = failed;
    Common placed = common;
    if (placed.manifest_path.empty())
        placed.manifest_path = (fs::path(a.out_dir) / (spec.name + ".manifest.json")).string();
    emit_manifest(man, placed, "");
    std::cout << csv_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct AppendixArgs {
    double s = 0.8;
    std::string model = "mp";
    std::string grid = "1024,2048,4096,8192,16384";
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    std::uint64_t burn_in = mplm::kDefaultBurnIn;
    std::string out;
};

int run_appendixb(const AppendixArgs& a, const Common& common) {
    Manifest man{"appendixb"};
    std::vector<std::size_t> grid;
    for (const auto& g : mplm::split(a.grid, ',')) grid.push_back(mplm::parse_uint(g, "grid"));
    auto model = mplm::model_for_s(mplm::parse_model(a.model), a.s);
    model.burn_in = a.burn_in;
    const mplm::SeriesSource source(model);
    const auto fit = mplm::scaling_exponent(source, grid, a.reps, a.seed);

    std::ostringstream os;
    os << "N,var,log_var\n";
    for (std::size_t i = 0; i < fit.grid.size(); ++i)
        os << fit.grid[i] << ',' << mplm::format_double(fit.variances[i]) << ','
           << mplm::format_double(std::log(fit.variances[i])) << '\n';
    json footer = {{"exponent", fit.exponent},
                   {"intercept", fit.intercept},
                   {"r_squared", fit.r_squared},
                   {"target", mplm::partial_sum_exponent_for_s(a.s)}};
    os << "# " << footer.dump() << '\n';
    write_text(a.out, os.str());

    man.seed = a.seed;
    man.parameters = {{"s", a.s},       {"model", a.model}, {"grid", grid},
                      {"reps", a.reps}, {"burn_in", a.burn_in}, {"out", a.out.empty() ? "-" : a.out}};
    man.extra["fit"] = footer;
    emit_manifest(man, common, a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intermittent-map series simulation and memory-parameter estimation", "mplm"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Common common;

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Generate a 0/1 series (CSV t,x)");
    option(s, "model", sim.model, "mp, lbp or markov")->check(CLI::IsMember({"mp", "lbp", "markov"}))->capture_default_str();
    auto* s_opt = option(s, "s", sim.s, "Intermittency parameter s > 0");
    auto* g_opt = option(s, "gamma", sim.gamma, "Tail exponent gamma > 2 (lbp, markov)");
    s_opt->excludes(g_opt);
    option(s, "n", sim.n, "Series length")->required();
    option(s, "seed", sim.seed, "Base seed")->capture_default_str();
    option(s, "burn-in", sim.burn_in, "Discarded iterations before output")->capture_default_str();
    option(s, "interval", sim.interval, "Observable interval lo,hi (open)")->capture_default_str();
    option(s, "out", sim.out, "Output file (default stdout)");

    SpectrumArgs spc;
    auto* p = app.add_subcommand("spectrum", "Raw or lag-window periodogram (CSV omega,ordinate)");
    option(p, "in", spc.in, "Series CSV")->required();
    option(p, "smooth", spc.smooth, "none, parzen or cosbell")
        ->check(CLI::IsMember({"none", "parzen", "cosbell"}))
        ->capture_default_str();
    option(p, "m", spc.m, "Lag-window truncation (default floor(N^0.9))");
    flag(p, "raw", spc.raw, "Do not subtract the mean (unsmoothed only)");
    option(p, "out", spc.out, "Output file (default stdout)");

    EstimateArgs est;
    auto* e = app.add_subcommand("estimate", "Estimate s from a series");
    option(e, "in", est.in, "Series CSV")->required();
    option(e, "method", est.method, "perio, parzen, cos1, cos2, varmp, vpmp, wmp-haar, wmp-mexhat, p, sp")->required();
    flag(e, "json", est.json_out, "Print the result as JSON");
    option(e, "holder-freq", est.holder_freq, "Fourier index j for p/sp")->capture_default_str();
    flag(e, "holder-average", est.holder_average, "Average p/sp over j = 1..floor(N^0.2)");
    option(e, "varmp-theta", est.varmp_theta, "Varmp block length exponent")->capture_default_str();
    flag(e, "raw", est.raw, "Do not subtract the mean (perio, wavelets)");
    option(e, "out", est.out, "Output file (default stdout)");

    MonteCarloArgs mc;
    auto* c = app.add_subcommand("montecarlo", "Replicated estimator study");
    auto* spec_opt = option(c, "spec", mc.spec, "Experiment spec file (key = value lines)");
    auto* preset_opt = option(c, "preset", mc.preset, "table51, table52, table53, table54 or table71");
    spec_opt->excludes(preset_opt);
    option(c, "scale", mc.scale, "Shrink replications by this factor in (0, 1]");
    flag(c, "scale-n", mc.scale_n, "Shrink sample sizes by the same factor");
    option(c, "reps", mc.reps, "Override the number of replications");
    option(c, "seed", mc.seed, "Override the base seed");
    option(c, "threads", mc.threads, "Worker threads (0 = all cores)")->capture_default_str();
    option(c, "out-dir", mc.out_dir, "Directory for the table CSV and manifest")->capture_default_str();

    AppendixArgs apx;
    auto* b = app.add_subcommand("appendixb", "Scaling of Var(S_N) across replications (CSV N,var,log_var)");
    option(b, "s", apx.s, "Intermittency parameter")->capture_default_str();
    option(b, "model", apx.model, "mp, lbp or markov")->check(CLI::IsMember({"mp", "lbp", "markov"}))->capture_default_str();
    option(b, "grid", apx.grid, "Comma-separated sample sizes")->capture_default_str();
    option(b, "reps", apx.reps, "Replications per size")->capture_default_str();
    option(b, "seed", apx.seed, "Base seed")->capture_default_str();
    option(b, "burn-in", apx.burn_in, "Discarded iterations before output")->capture_default_str();
    option(b, "out", apx.out, "Output file (default stdout)");

    for (auto* sub : {s, p, e, c, b})
        option(sub, "manifest", common.manifest_path, "Write the run manifest here instead of next to the output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& ok) {
        return app.exit(ok);
    } catch (const CLI::ParseError& err) {
        std::cerr << "error: " << err.what() << "\n\n";
        const CLI::App* failed = &app;
        for (const auto* sub : {s, p, e, c, b})
            if (sub->parsed()) failed = sub;
        std::cerr << failed->help();
        return 1;
    }

    try {
        if (*s) return run_simulate(sim, common);
        if (*p) return run_spectrum(spc, common);
        if (*e) return run_estimate(est, common);
        if (*c) return run_montecarlo(mc, common);
        if (*b) return run_appendixb(apx, common);
    } catch (const mplm::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "runtime failure: " << err.what() << "\n";
        return 2;
    }
    return 1;
}
