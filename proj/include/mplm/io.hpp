#pragma once

/**
 * @file io.hpp
 * CSV readers/writers and the line-oriented experiment spec format.
 */

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mplm/error.hpp"
#include "mplm/montecarlo.hpp"
#include "mplm/spectral.hpp"

namespace mplm {

/// Shortest-enough decimal with up to 17 significant digits, locale-free.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline double parse_double(std::string_view text, std::string_view what) {
    const std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ValidationError(std::string(what) + ": not a number: '" + s + "'");
    return v;
}

inline std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    const std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
        throw ValidationError(std::string(what) + ": not a nonnegative integer: '" + s + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Series CSV: header `t,x`, one row per observation.

inline void write_series_csv(std::ostream& os, std::span<const double> x) {
    os << "t,x\n";
    for (std::size_t t = 0; t < x.size(); ++t) {
        os << t << ',';
        if (x[t] == 0.0 || x[t] == 1.0)
            os << static_cast<int>(x[t]);
        else
            os << format_double(x[t]);
        os << '\n';
    }
}

/// Accepts `t,x` or a single `x` column; a non-numeric first line is a header.
inline std::vector<double> read_series_csv(std::istream& is) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto cols = split(text, ',');
        const std::string& value = cols.back();
        if (lineno == 1 && !value.empty() && (std::isalpha(static_cast<unsigned char>(value[0])) != 0)) continue;
        if (cols.size() > 2) throw ValidationError("series line " + std::to_string(lineno) + ": expected t,x");
        const double v = parse_double(value, "series line " + std::to_string(lineno));
        detail::require(std::isfinite(v), "series line " + std::to_string(lineno) + ": non-finite value");
        out.push_back(v);
    }
    detail::require(!out.empty(), "series file holds no observations");
    return out;
}

inline std::vector<double> read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open series file '" + path + "'");
    return read_series_csv(in);
}

// ---------------------------------------------------------------------------

inline void write_periodogram_csv(std::ostream& os, const Periodogram& p) {
    os << "omega,ordinate\n";
    for (std::size_t i = 0; i < p.freqs.size(); ++i)
        os << format_double(p.freqs[i]) << ',' << format_double(p.ordinates[i]) << '\n';
}

inline void write_summary_csv(std::ostream& os, std::span<const McSummary> rows) {
    os << "s,N,method,mean,sd,mse,invalid\n";
    for (const auto& r : rows) {
        os << format_double(r.s) << ',' << r.n << ',' << to_string(r.method) << ',';
        if (r.failed) {
            os << "nan,nan,nan";
        } else {
            os << format_double(r.mean_s_hat) << ',' << format_double(r.sd_s_hat) << ',' << format_double(r.mse_s_hat);
        }
        os << ',' << r.invalid_count << '\n';
    }
}

// ---------------------------------------------------------------------------
// Experiment spec files.
//
//   # comment
//   preset = table51      (optional starting point)
//   name = mine
//   s = 0.6, 0.65
//   n = 10000, 20000
//   methods = perio, cos2
//   reps = 100
//   seed = 7
//   model = mp
//   burn-in = 10000
//   interval = 0.1, 0.9
//   centered = true
//   scale = 0.25
//
// `--key value` and `--key=value` lines are accepted too.

struct SpecFile {
    ExperimentSpec spec;
    double scale = 1.0;
    bool scale_n = false;
    bool power_of_two_sizes = false;
};

inline MapKind parse_model(std::string_view name) {
    if (name == "mp") return MapKind::MannevillePomeau;
    if (name == "lbp") return MapKind::LinearByPart;
    if (name == "markov") return MapKind::MarkovChain;
    throw ValidationError("unknown model '" + std::string(name) + "' (mp, lbp, markov)");
}

inline bool parse_bool(std::string_view v, std::string_view what) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError(std::string(what) + ": expected a boolean, got '" + std::string(v) + "'");
}

inline Interval parse_interval(std::string_view text) {
    const auto parts = split(text, ',');
    detail::require(parts.size() == 2, "interval must be lo,hi");
    return {parse_double(parts[0], "interval"), parse_double(parts[1], "interval")};
}

inline SpecFile parse_spec(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto text = trim(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = trim(text.substr(0, hash));
        if (text.empty()) continue;
        std::string key, value;
        if (text.starts_with("--")) {
            text.remove_prefix(2);
            const auto cut = text.find_first_of("= \t");
            key = std::string(trim(text.substr(0, cut)));
            value = cut == std::string_view::npos ? "true" : std::string(trim(text.substr(cut + 1)));
        } else {
            const auto eq = text.find('=');
            if (eq == std::string_view::npos)
                throw ValidationError("spec line " + std::to_string(lineno) + ": expected key = value");
            key = std::string(trim(text.substr(0, eq)));
            value = std::string(trim(text.substr(eq + 1)));
        }
        for (auto& c : key)
            if (c == '_') c = '-';
        entries.emplace_back(std::move(key), std::move(value));
    }

    SpecFile out;
    for (const auto& [key, value] : entries) {
        if (key != "preset") continue;
        const auto preset = find_preset(value);
        if (!preset) throw ValidationError("unknown preset '" + value + "'");
        out.spec = preset->spec;
        out.power_of_two_sizes = preset->power_of_two_sizes;
    }
    for (const auto& [key, value] : entries) {
        if (key == "preset") {
            continue;
        } else if (key == "name") {
            out.spec.name = value;
        } else if (key == "s") {
            out.spec.s_values.clear();
            for (const auto& v : split(value, ',')) out.spec.s_values.push_back(parse_double(v, "s"));
        } else if (key == "n") {
            out.spec.n_values.clear();
            for (const auto& v : split(value, ',')) out.spec.n_values.push_back(parse_uint(v, "n"));
        } else if (key == "methods" || key == "method") {
            out.spec.methods.clear();
            for (const auto& v : split(value, ',')) {
                const auto m = parse_method(v);
                if (!m) throw ValidationError("unknown method '" + v + "'");
                out.spec.methods.push_back(*m);
            }
        } else if (key == "reps") {
            out.spec.reps = parse_uint(value, "reps");
        } else if (key == "seed") {
            out.spec.seed = parse_uint(value, "seed");
        } else if (key == "model") {
            out.spec.model = parse_model(value);
        } else if (key == "burn-in") {
            out.spec.burn_in = parse_uint(value, "burn-in");
        } else if (key == "interval") {
            out.spec.observable.interval = parse_interval(value);
        } else if (key == "centered") {
            out.spec.observable.centered = parse_bool(value, "centered");
            out.spec.estimator.centered = out.spec.observable.centered;
        } else if (key == "scale") {
            out.scale = parse_double(value, "scale");
        } else if (key == "scale-n") {
            out.scale_n = parse_bool(value, "scale-n");
        } else if (key == "varmp-theta") {
            out.spec.estimator.varmp_theta = parse_double(value, "varmp-theta");
        } else if (key == "holder-freq") {
            out.spec.estimator.holder_freq_index = parse_uint(value, "holder-freq");
        } else if (key == "holder-average") {
            out.spec.estimator.holder_average = parse_bool(value, "holder-average");
        } else {
            throw ValidationError("unknown spec key '" + key + "'");
        }
    }
    return out;
}

inline SpecFile read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open spec file '" + path + "'");
    return parse_spec(in);
}

/// Applies the file's scale factor, if any.
inline ExperimentSpec resolve(const SpecFile& f) {
    if (f.scale == 1.0 && !f.scale_n) return f.spec;
    return scaled(Preset{f.spec, f.power_of_two_sizes}, f.scale, f.scale_n);
}

}  // namespace mplm
