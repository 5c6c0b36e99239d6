#include "tracelab/gallery.hpp"

#include <cmath>
#include <random>

#include "tracelab/error.hpp"

namespace tracelab {

OperatorModel make_t0(int k_max) {
    if (k_max > kT0MaxDepth) {
        throw RangeTooDeep("make_t0: k_max = " + std::to_string(k_max) + " exceeds " + std::to_string(kT0MaxDepth));
    }
    if (k_max < 1) throw ConfigError("make_t0: k_max must be at least 1");
    std::vector<DD> knots{DD(1.0)};
    std::vector<LogReal> values{LogReal::from_log(DD(-1.0))};
    std::vector<DD> lengths{DD(1.0)};
    DD prev = DD(1.0);
    for (int k = 1; k <= k_max; ++k) {
        DD ek = exp(DD(k));
        knots.push_back(ek);
        values.push_back(LogReal::from_log(DD(k) - ek));
        lengths.push_back(ek + log1mexp(prev - ek));
        prev = ek;
    }
    OperatorModel m{StepFunction::with_log_lengths(knots, values, lengths), std::nullopt, "t0", knots.back(),
                    GeneratorSpec{"t0", {{"k_max", k_max}}}};
    return m;
}

namespace {

// log of the mean of s^-alpha over [e^la, e^(la + d)].
DD log_power_mean(double alpha, DD la, DD d) {
    DD log_width_factor = log(expm1(d));  // log((b - a)/a)
    if (alpha == 1.0) return log(d) - la - log_width_factor;
    DD one_minus = DD(1.0) - alpha;
    DD num = alpha > 1.0 ? log(-expm1(one_minus * d)) - log(DD(alpha) - 1.0)
                         : log(expm1(one_minus * d)) - log(DD(1.0) - alpha);
    return num - la * alpha - log_width_factor;
}

}  // namespace

OperatorModel make_power(double alpha, const LatticeOptions& o) {
    if (!(alpha >= 1.0)) throw ConfigError("make_power: alpha must be >= 1");
    if (o.n_max < 1 || o.n_max > 10000000) throw ConfigError("make_power: n_max must lie in [1, 1e7]");
    if (!(o.growth >= 1.0) || !(o.max_step > 0.0)) throw ConfigError("make_power: bad continuation parameters");
    if (o.spectrum < 0 || o.spectrum > 100000) throw ConfigError("make_power: spectrum size must lie in [0, 1e5]");
    std::vector<DD> knots, lengths;
    std::vector<LogReal> values;
    knots.reserve(o.n_max + 400000);
    values.reserve(o.n_max + 400000);
    lengths.reserve(o.n_max + 400000);
    for (std::int64_t n = 0; n < o.n_max; ++n) {
        DD l = log(DD(static_cast<double>(n + 1)));
        knots.push_back(l);
        values.push_back(LogReal::from_log(-l * alpha));
        lengths.push_back(DD(0.0));
    }
    DD la = knots.back();
    DD d = log1p(DD(1.0) / static_cast<double>(o.n_max));
    while (la < DD(o.v_max)) {
        DD lb = la + d;
        knots.push_back(lb);
        values.push_back(LogReal::from_log(log_power_mean(alpha, la, d)));
        lengths.push_back(la + log(expm1(d)));
        la = lb;
        d = std::min(d * o.growth, DD(o.max_step));
    }
    std::string name = alpha == 1.0 ? "harmonic" : "power";
    nlohmann::ordered_json params;
    if (alpha != 1.0) params["alpha"] = alpha;
    params["n_max"] = o.n_max;
    if (o.spectrum > 0) params["spectrum"] = o.spectrum;
    OperatorModel m{StepFunction::with_log_lengths(std::move(knots), std::move(values), std::move(lengths)),
                    std::nullopt, alpha == 1.0 ? "harmonic" : "power(" + nlohmann::json(alpha).dump() + ")",
                    la, GeneratorSpec{name, params}};
    if (o.spectrum > 0) {
        std::vector<Eigenvalue> ev;
        ev.reserve(o.spectrum);
        for (std::int64_t n = 0; n < o.spectrum; ++n) ev.push_back({std::pow(double(n + 1), -alpha), 1});
        m.spectrum = SpectrumModel(std::move(ev));
    }
    return m;
}

OperatorModel make_harmonic(const LatticeOptions& options) { return make_power(1.0, options); }

OperatorModel make_plateau(const std::vector<double>& values, const std::vector<double>& lengths) {
    if (values.empty() || values.size() != lengths.size()) {
        throw ConfigError("plateau: values and lengths must be nonempty and of equal size");
    }
    std::vector<DD> knots;
    std::vector<LogReal> vals;
    DD t(0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(lengths[i] > 0.0)) throw ConfigError("plateau: lengths must be positive");
        t += lengths[i];
        knots.push_back(log(t));
        vals.push_back(LogReal::from_double(values[i]));
    }
    nlohmann::ordered_json params{{"values", values}, {"lengths", lengths}};
    return OperatorModel{StepFunction(knots, vals), std::nullopt, "plateau", std::nullopt,
                         GeneratorSpec{"plateau", params}};
}

OperatorModel make_indicator() {
    return OperatorModel{StepFunction({DD(0.0)}, {LogReal::one()}), std::nullopt, "indicator", std::nullopt,
                         GeneratorSpec{"indicator", nlohmann::ordered_json::object()}};
}

Profile make_x_function(int k_max) {
    if (k_max < 1 || k_max > kT0MaxDepth) throw ConfigError("make_x_function: k_max must lie in [1, 40]");
    const DD c = -log1mexp(DD(-1.0));  // log(e/(e-1))
    auto f = [c](DD u) {
        DD k = floor(u);
        return LogReal::from_log(c + k - u);
    };
    std::vector<DD> breaks;
    for (int k = 0; k <= k_max; ++k) breaks.push_back(DD(k));
    return Profile::closed_form(Coord::U, f, DD(0.0), DD(k_max), breaks, "x_function");
}

SpectrumLaw parse_law(const std::string& name) {
    if (name == "disc") return SpectrumLaw::Disc;
    if (name == "annulus") return SpectrumLaw::Annulus;
    if (name == "real-line" || name == "real") return SpectrumLaw::RealLine;
    throw ConfigError("unknown spectrum law '" + name + "' (expected disc, annulus or real-line)");
}

const char* law_name(SpectrumLaw law) {
    switch (law) {
        case SpectrumLaw::Disc:
            return "disc";
        case SpectrumLaw::Annulus:
            return "annulus";
        case SpectrumLaw::RealLine:
            return "real-line";
    }
    return "?";
}

SpectrumModel random_spectrum(std::uint64_t seed, std::int64_t n, SpectrumLaw law) {
    if (n < 0 || n > 100000) throw ConfigError("random_spectrum: n must lie in [0, 1e5]");
    std::mt19937_64 rng(seed);
    // 53-bit uniforms built by hand so the stream does not depend on the
    // standard library's distribution implementation.
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    std::vector<Eigenvalue> ev;
    ev.reserve(n);
    for (std::int64_t j = 0; j < n; ++j) {
        std::complex<double> w;
        switch (law) {
            case SpectrumLaw::Disc: {
                double r = std::sqrt(uniform()), th = 2.0 * M_PI * uniform();
                w = std::polar(r, th);
                break;
            }
            case SpectrumLaw::Annulus: {
                double r = std::sqrt(0.25 + 0.75 * uniform()), th = 2.0 * M_PI * uniform();
                w = std::polar(r, th);
                break;
            }
            case SpectrumLaw::RealLine:
                w = 2.0 * uniform() - 1.0;
                break;
        }
        ev.push_back({w / static_cast<double>(j + 1), 1});
    }
    return SpectrumModel(std::move(ev));
}

OracleSum oracle_partial_sum(const std::string& expr, double p, std::int64_t N) {
    if (N < 0 || N > 10000000) throw ConfigError("oracle_partial_sum: N must lie in [0, 1e7]");
    if (expr == "harmonic") {
        p = 1.0;
    } else if (expr != "power" && expr != "zeta") {
        throw ConfigError("oracle_partial_sum: unknown expression '" + expr + "'");
    }
    // Neumaier summation.
    double s = 0.0, c = 0.0;
    for (std::int64_t n = N; n >= 1; --n) {
        double term = p == 1.0 ? 1.0 / static_cast<double>(n) : std::pow(static_cast<double>(n), -p);
        double t = s + term;
        c += std::abs(s) >= std::abs(term) ? (s - t) + term : (term - t) + s;
        s = t;
    }
    double value = s + c;
    return {value, static_cast<double>(N) * std::ldexp(std::abs(value), -52)};
}

namespace {

template <class T>
T param(const nlohmann::ordered_json& p, const char* key, T fallback) {
    if (!p.contains(key)) return fallback;
    try {
        return p.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("generator parameter '") + key + "': " + e.what());
    }
}

LatticeOptions lattice_options(const nlohmann::ordered_json& p) {
    LatticeOptions o;
    o.n_max = param<std::int64_t>(p, "n_max", o.n_max);
    o.v_max = param<double>(p, "v_max", o.v_max);
    o.growth = param<double>(p, "growth", o.growth);
    o.max_step = param<double>(p, "max_step", o.max_step);
    o.spectrum = param<std::int64_t>(p, "spectrum", o.spectrum);
    return o;
}

}  // namespace

OperatorModel expand(const GeneratorSpec& spec) {
    const auto& p = spec.params;
    if (!p.is_object()) throw ConfigError("generator params must be an object");
    if (spec.name == "t0") return make_t0(param<int>(p, "k_max", kT0DefaultDepth));
    if (spec.name == "harmonic") return make_harmonic(lattice_options(p));
    if (spec.name == "power") return make_power(param<double>(p, "alpha", 2.0), lattice_options(p));
    if (spec.name == "indicator") return make_indicator();
    if (spec.name == "plateau") {
        auto values = param<std::vector<double>>(p, "values", {});
        auto lengths = param<std::vector<double>>(p, "lengths", std::vector<double>(values.size(), 1.0));
        return make_plateau(values, lengths);
    }
    if (spec.name == "random_spectrum") {
        auto seed = param<std::uint64_t>(p, "seed", 1);
        auto n = param<std::int64_t>(p, "n", 1000);
        auto law = parse_law(param<std::string>(p, "law", "disc"));
        OperatorModel m = normal_model(random_spectrum(seed, n, law), "random_spectrum");
        m.generator = spec;
        return m;
    }
    throw ConfigError("unknown generator '" + spec.name + "'");
}

std::vector<GalleryEntry> gallery_entries() {
    using J = nlohmann::ordered_json;
    return {
        {"t0", "plateaus e^(k-e^k) up to t = e^(e^k), k <= 30", {"t0", J{{"k_max", kT0DefaultDepth}}}},
        {"harmonic", "1/(n+1) on [n, n+1) up to 1e6, mean-of-1/s pieces to v = e^13", {"harmonic", J::object()}},
        {"power2", "(n+1)^-2, trace class", {"power", J{{"alpha", 2.0}}}},
        {"indicator", "indicator of [0, 1)", {"indicator", J::object()}},
        {"plateau", "values 1, 1/2, 1/4 on unit intervals", {"plateau", J{{"values", {1.0, 0.5, 0.25}}}}},
        {"random_disc", "normal operator, 1000 eigenvalues w/(j+1), w uniform in the unit disc",
         {"random_spectrum", J{{"seed", 1}, {"n", 1000}, {"law", "disc"}}}},
    };
}

GeneratorSpec gallery_spec(const std::string& name) {
    for (const auto& e : gallery_entries()) {
        if (e.name == name) return e.spec;
    }
    throw ConfigError("unknown gallery model '" + name + "'");
}

}  // namespace tracelab
