#include "tracelab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tracelab/error.hpp"
#include "tracelab/parallel.hpp"
#include "tracelab/profiles.hpp"
#include "tracelab/quadrature.hpp"

namespace tracelab {

namespace {

constexpr int kOffsetLevels = 100;

double finite_or_nan(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

nlohmann::ordered_json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

// Breaks in [a, b], thinned evenly to at most cap entries.
std::vector<DD> thinned_breaks(const Profile& p, DD a, DD b, int cap) {
    std::vector<DD> br = p.breaks(a, b);
    if (static_cast<int>(br.size()) <= cap) return br;
    std::vector<DD> out;
    for (int i = 0; i < cap; ++i) out.push_back(br[(br.size() - 1) * i / std::max(1, cap - 1)]);
    return out;
}

// Points b - 2^-j * span (and b + ..., if after) down to near working precision.
void add_offsets(std::vector<DD>& out, DD b, double span, bool before, bool after) {
    double floor_offset = std::max(1.0, std::abs(b.hi())) * 1e-28;
    double h = span;
    for (int j = 0; j < kOffsetLevels && h > floor_offset; ++j) {
        h *= 0.5;
        if (before) out.push_back(b - DD(h));
        if (after) out.push_back(b + DD(h));
    }
}

std::vector<double> evaluate(const Profile& p, const std::vector<DD>& xs) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = p.at(xs[i]).to_double(); });
    return out;
}

struct LinearFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

// Cumulative integral of p on the uniform grid lo + i/spu.
std::vector<double> grid_integral(const Profile& p, DD lo, std::size_t n, double step) {
    std::vector<DD> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + DD(step) * static_cast<double>(i);
    std::vector<double> out(n, 0.0);
    if (p.is_closed_form()) {
        auto cum = cumulative_integral(p, grid);
        for (std::size_t i = 0; i < n; ++i) out[i] = cum[i].value;
    } else {
        std::vector<double> vals = evaluate(p, grid);
        for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * step * (vals[i - 1] + vals[i]);
    }
    return out;
}

}  // namespace

const char* verdict_kind_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::Convergent:
            return "Convergent";
        case VerdictKind::Oscillating:
            return "Oscillating";
        case VerdictKind::PeriodicMean:
            return "PeriodicMean";
        case VerdictKind::Inconclusive:
            return "Inconclusive";
    }
    return "?";
}

nlohmann::ordered_json to_json(const Verdict& v) {
    nlohmann::ordered_json j;
    j["kind"] = verdict_kind_name(v.kind);
    j["value"] = v.value ? number(v.value->value) : nlohmann::ordered_json();
    j["liminf"] = number(v.liminf.value);
    j["limsup"] = number(v.limsup.value);
    j["period"] = v.period ? number(*v.period) : nlohmann::ordered_json();
    auto& w = j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& x : v.witnesses) w.push_back({{"scale_u", number(x.scale_u)}, {"value", number(x.value)}});
    if (v.envelope) {
        j["envelope"] = {number(v.envelope->first), number(v.envelope->second)};
    } else {
        j["envelope"] = nullptr;
    }
    nlohmann::ordered_json d = v.diagnostics;
    d["value_radius"] = v.value ? number(v.value->radius) : nlohmann::ordered_json();
    d["liminf_radius"] = number(v.liminf.radius);
    d["limsup_radius"] = number(v.limsup.radius);
    j["diagnostics"] = std::move(d);
    return j;
}

WindowStats window_stats(const Profile& p, DD a, DD b, int phi_samples, int knot_probes) {
    std::vector<DD> xs;
    double span = (b - a).to_double();
    for (int i = 0; i < phi_samples; ++i) xs.push_back(a + (b - a) * (static_cast<double>(i) / phi_samples));
    add_offsets(xs, b, span, true, false);
    for (DD br : thinned_breaks(p, a, b, knot_probes)) {
        if (br > a && br < b) xs.push_back(br);
        add_offsets(xs, br, span, br > a, br < b);
    }
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](DD x) { return x < a || !(x < b) || !p.contains(x); }),
             xs.end());
    if (xs.empty()) throw DomainTooSmall("window_stats: no probe inside the profile domain");
    std::vector<double> vals = evaluate(p, xs);
    WindowStats s;
    s.start = a.to_double();
    s.min = std::numeric_limits<double>::infinity();
    s.max = -s.min;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (vals[i] < s.min) {
            s.min = vals[i];
            s.argmin = xs[i].to_double();
        }
        if (vals[i] > s.max) {
            s.max = vals[i];
            s.argmax = xs[i].to_double();
        }
    }
    return s;
}

SuchestonResult sucheston_upper(const Profile& p, DD lo, DD hi, const std::vector<double>& windows, int spu,
                                bool negate) {
    if (windows.size() < 2) throw ConfigError("sucheston_upper: at least two window lengths are required");
    if (spu < 1) throw ConfigError("sucheston_upper: spu must be positive");
    double H = (hi - lo).to_double();
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (!(windows[i] > 0.0) || (i > 0 && !(windows[i] > windows[i - 1]))) {
            throw ConfigError("sucheston_upper: window lengths must be positive and increasing");
        }
        if (windows[i] > H / 2.0) {
            throw HorizonTooShort("sucheston_upper: window " + std::to_string(windows[i]) +
                                  " exceeds half the horizon " + std::to_string(H));
        }
    }
    const double step = 1.0 / spu;
    const std::size_t n = static_cast<std::size_t>(std::floor(H * spu + 1e-9)) + 1;
    std::vector<double> I = grid_integral(p, lo, n, step);
    SuchestonResult r;
    r.windows = windows;
    for (double w : windows) {
        std::size_t k = static_cast<std::size_t>(std::llround(w * spu));
        double wk = static_cast<double>(k) * step;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t h = 0; h + k < n; ++h) {
            double m = (I[h + k] - I[h]) / wk;
            best = std::max(best, negate ? -m : m);
        }
        r.means.push_back(negate ? -best : best);
    }
    std::vector<double> inv;
    for (double w : windows) inv.push_back(1.0 / w);
    LinearFit f = fit_line(inv, r.means);
    r.bound = f.intercept;
    double worst = 0.0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        worst = std::max(worst, std::abs(r.means[i] - (f.intercept + f.slope * inv[i])));
    }
    // Distance to the last raw mean bounds what the fit itself contributes.
    r.uncertainty = worst + std::abs(r.means.back() - r.bound) * 0.5;
    return r;
}

PeriodicityResult asymptotic_periodicity(const Profile& p, double period, int n0, int n1, double threshold,
                                         double offset, bool probe_breaks) {
    if (!(period > 0.0)) throw ConfigError("asymptotic_periodicity: period must be positive");
    if (n1 < n0 + 1) throw ConfigError("asymptotic_periodicity: at least three windows are required");
    PeriodicityResult r;
    double scale = 1.0;
    for (int n = n0; n <= n1; ++n) {
        DD a = DD(offset) + DD(period) * static_cast<double>(n);
        DD a2 = a + period;
        std::vector<DD> s;
        for (int i = 0; i < 256; ++i) s.push_back(DD(period) * (i / 256.0));
        std::vector<DD> ends;
        if (probe_breaks) {
            ends.push_back(DD(period));
            for (DD br : thinned_breaks(p, a, a + period, 32)) ends.push_back(br - a);
            for (DD br : thinned_breaks(p, a2, a2 + period, 32)) ends.push_back(br - a2);
        }
        for (DD e : ends) {
            // The break itself is not probed: the matching break one period
            // on may sit a rounding error away on either side.
            add_offsets(s, e, period, true, e < DD(period));
        }
        s.erase(std::remove_if(s.begin(), s.end(),
                               [&](DD x) { return x < DD(0.0) || !(x < DD(period)) || !p.contains(a2 + x) || !p.contains(a + x); }),
                s.end());
        std::vector<DD> xs;
        for (DD x : s) {
            xs.push_back(a + x);
            xs.push_back(a2 + x);
        }
        std::vector<double> vals = evaluate(p, xs);
        double dev = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            dev = std::max(dev, std::abs(vals[2 * i] - vals[2 * i + 1]));
            scale = std::max({scale, std::abs(vals[2 * i]), std::abs(vals[2 * i + 1])});
        }
        if (s.empty()) throw DomainTooSmall("asymptotic_periodicity: windows fall outside the profile domain");
        r.deviations.push_back(dev);
    }
    const double slack = 1e-13 * scale;
    bool monotone = true;
    for (std::size_t i = 1; i < r.deviations.size(); ++i) {
        if (r.deviations[i] > r.deviations[i - 1] + slack) monotone = false;
    }
    r.passes = monotone && r.deviations.back() <= threshold;
    return r;
}

PeriodicMean periodic_mean(const Profile& p, double period, double threshold, double offset) {
    if (!(period > 0.0)) throw ConfigError("periodic_mean: period must be positive");
    double hi = p.hi().to_double(), lo = p.lo().to_double();
    if (!std::isfinite(hi)) throw DomainTooSmall("periodic_mean: profile domain must be bounded above");
    int n_last = static_cast<int>(std::floor((hi - offset) / period + 1e-12)) - 1;
    int n_first = n_last - 2;
    if (std::isfinite(lo) && offset + n_first * period < lo - 1e-12) {
        throw NotPeriodic("periodic_mean: fewer than three full periods in the domain");
    }
    PeriodicityResult check = asymptotic_periodicity(p, period, n_first, n_last - 1, threshold, offset);
    if (!check.passes) {
        throw NotPeriodic("periodic_mean: periodicity check failed (last deviation " +
                          std::to_string(check.deviations.back()) + ")");
    }
    DD a = DD(offset) + DD(period) * static_cast<double>(n_last);
    PeriodicMean m;
    m.window_start = a.to_double();
    if (p.is_closed_form()) {
        QuadResult q = integrate(p, a, a + period);
        m.value = q.value / period;
        m.error = q.error / period;
    } else {
        double h = p.step().to_double();
        int cells = std::max(2, static_cast<int>(std::llround(period / h)));
        if (cells % 2) ++cells;
        auto trap = [&](int c) {
            double step = period / c, s = 0.0;
            for (int i = 0; i <= c; ++i) {
                double w = (i == 0 || i == c) ? 0.5 : 1.0;
                s += w * p.at(a + DD(step) * static_cast<double>(i)).to_double();
            }
            return s * step / period;
        };
        double fine = trap(cells), coarse = trap(cells / 2);
        m.value = (4.0 * fine - coarse) / 3.0;
        m.error = std::abs(m.value - fine);
    }
    m.error += check.deviations.back();
    return m;
}

VanishingResult vanishing_check(const Profile& p, const std::vector<double>& horizons, double threshold) {
    if (horizons.empty()) throw ConfigError("vanishing_check: no horizons");
    VanishingResult r;
    r.horizons = horizons;
    std::vector<double> hs = horizons;
    std::sort(hs.begin(), hs.end());
    if (!(hs.front() > 0.0)) throw ConfigError("vanishing_check: horizons must be positive");
    double U = hs.back();
    std::vector<double> pts{0.0, U / 2.0};
    pts.insert(pts.end(), hs.begin(), hs.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<DD> grid(pts.begin(), pts.end());
    auto cum = cumulative_integral(p, grid);
    auto I = [&](double x) {
        auto it = std::lower_bound(pts.begin(), pts.end(), x);
        return cum[it - pts.begin()].value;
    };
    bool monotone = true;
    for (double h : horizons) {
        double avg = I(h) / h;
        if (!r.averages.empty() && avg > r.averages.back() * (1.0 + 1e-9) + 1e-300) monotone = false;
        r.averages.push_back(avg);
        r.fitted_c = std::max(r.fitted_c, I(h));
    }
    r.tail_increment = I(U) - I(U / 2.0);
    bool settled = r.tail_increment <= threshold * std::max(1.0, I(U));
    r.passes = monotone && (r.averages.back() <= threshold || settled);
    return r;
}

UcModulus uc_modulus(const Profile& p, DD a, DD b, const std::vector<double>& deltas) {
    UcModulus r;
    r.deltas = deltas;
    std::vector<DD> brk = thinned_breaks(p, a, b, 64);
    for (double d : deltas) {
        std::vector<DD> xs;
        DD span = b - a - d;
        if (!(span > DD(0.0))) throw DomainTooSmall("uc_modulus: interval shorter than delta");
        for (int i = 0; i <= 512; ++i) xs.push_back(a + span * (i / 512.0));
        for (DD br : brk) {
            if (br - d * 0.5 > a && br + d * 0.5 < b) xs.push_back(br - d * 0.5);
        }
        std::vector<DD> all;
        for (DD x : xs) {
            all.push_back(x);
            all.push_back(x + d);
        }
        std::vector<double> v = evaluate(p, all);
        double m = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) m = std::max(m, std::abs(v[2 * i + 1] - v[2 * i]));
        r.moduli.push_back(m);
    }
    r.passes = true;
    for (std::size_t i = 1; i < r.moduli.size(); ++i) {
        if (r.moduli[i - 1] > 1e-14 && r.moduli[i] > 0.5 * r.moduli[i - 1]) r.passes = false;
    }
    return r;
}

double sweep_top(const OperatorModel& model, const SweepOptions& o) {
    if (!model.horizon_log) return o.u_top_default;
    if (!(*model.horizon_log > DD(1.0))) throw HorizonTooShort("model horizon lies below v = 1");
    return log(*model.horizon_log).to_double();
}

Verdict classify_windows(const std::vector<WindowStats>& windows, const Thresholds& thr, int tail_windows) {
    if (windows.empty()) throw HorizonTooShort("no sweep windows");
    const WindowStats& last = windows.back();
    Verdict v;
    v.liminf = {last.min, windows.size() > 1 ? std::abs(last.min - windows[windows.size() - 2].min) : 0.0};
    v.limsup = {last.max, windows.size() > 1 ? std::abs(last.max - windows[windows.size() - 2].max) : 0.0};
    auto& amps = v.diagnostics["window_amplitudes"] = nlohmann::ordered_json::array();
    for (const auto& w : windows) amps.push_back({{"start_u", w.start}, {"min", w.min}, {"max", w.max}});
    const double scale = std::max(1.0, std::abs(last.mid()));
    auto witnesses = [&] {
        std::size_t from = windows.size() > 4 ? windows.size() - 4 : 0;
        for (std::size_t i = from; i < windows.size(); ++i) {
            v.witnesses.push_back({windows[i].argmax, windows[i].max});
            v.witnesses.push_back({windows[i].argmin, windows[i].min});
        }
    };
    if (last.amplitude() <= thr.convergence * scale) {
        v.kind = VerdictKind::Convergent;
        v.value = Estimate{last.mid(), 0.5 * last.amplitude()};
        v.diagnostics["rule"] = "last-window amplitude below tolerance";
        witnesses();
        return v;
    }
    std::vector<double> xs, ys;
    std::size_t from = windows.size() > static_cast<std::size_t>(tail_windows) ? windows.size() - tail_windows : 0;
    for (std::size_t i = from; i < windows.size(); ++i) {
        if (windows[i].amplitude() > 0.0) {
            xs.push_back(windows[i].start);
            ys.push_back(std::log(windows[i].amplitude()));
        }
    }
    if (xs.size() >= 3) {
        LinearFit f = fit_line(xs, ys);
        double ratio = std::exp(f.slope);
        v.diagnostics["decay_ratio"] = finite_or_nan(ratio);
        v.diagnostics["decay_r2"] = f.r2;
        if (ratio <= 0.75 && f.r2 >= 0.9) {
            v.kind = VerdictKind::Convergent;
            double a = last.amplitude();
            v.value = Estimate{last.mid(), 0.5 * a + a * ratio / (1.0 - ratio)};
            v.diagnostics["rule"] = "window amplitudes decay geometrically";
            witnesses();
            return v;
        }
    }
    v.kind = VerdictKind::Oscillating;
    v.diagnostics["rule"] = "window amplitudes do not decay";
    witnesses();
    return v;
}

namespace {

void require_positive(const OperatorModel& m) {
    if (!m.is_positive()) throw ModelError("measurability analysis needs a positive model (spectrum is not >= 0)");
}

struct Sweep {
    int n_lo, n_hi;
    double u_top;
};

Sweep sweep_range(const OperatorModel& model, const SweepOptions& o) {
    Sweep s;
    s.u_top = sweep_top(model, o);
    s.n_lo = o.n_min;
    s.n_hi = o.n_max ? *o.n_max : static_cast<int>(std::floor(s.u_top + 1e-9)) - 1;
    if (s.n_hi + 1 > s.u_top + 1e-9) s.n_hi = static_cast<int>(std::floor(s.u_top + 1e-9)) - 1;
    if (s.n_hi < s.n_lo + 2) throw HorizonTooShort("sweep needs at least three u-windows below the horizon");
    return s;
}

std::vector<WindowStats> sweep(const Profile& pu, const Sweep& s, const SweepOptions& o) {
    std::vector<WindowStats> out;
    for (int n = s.n_lo; n <= s.n_hi; ++n) {
        out.push_back(window_stats(pu, DD(n), DD(n + 1), o.phi_samples, o.knot_probes));
    }
    return out;
}

nlohmann::ordered_json kind_summary(const Verdict& v) {
    nlohmann::ordered_json j;
    j["kind"] = verdict_kind_name(v.kind);
    j["value"] = v.value ? number(v.value->value) : nlohmann::ordered_json();
    j["liminf"] = number(v.liminf.value);
    j["limsup"] = number(v.limsup.value);
    return j;
}

// Profile values at the t-midpoints (e^(e^n) + e^(e^(n+1)))/2 of windows.
nlohmann::ordered_json t_midpoints(const Profile& pv, const Sweep& s) {
    auto out = nlohmann::ordered_json::array();
    for (int n = std::max(s.n_lo, s.n_hi - 3); n <= s.n_hi; ++n) {
        DD lo = exp(DD(n)), hi = exp(DD(n + 1));
        DD v = hi - dd_constants::ln2 + log1pexp(lo - hi);
        if (pv.contains(v)) out.push_back({{"n", n}, {"value", pv.at(v).to_double()}});
    }
    return out;
}

std::optional<double> autocorrelation_period(const Profile& p, double lo, double hi) {
    const int spu = 64;
    double len = std::min(20.0, hi - lo);
    int n = static_cast<int>(len * spu);
    if (n < 3 * spu / 10) return std::nullopt;
    std::vector<DD> xs;
    for (int i = 0; i < n; ++i) xs.push_back(DD(hi - len) + DD(static_cast<double>(i) / spu));
    std::vector<double> x = evaluate(p, xs);
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    for (double& y : x) y -= mean;
    double best = 0.0;
    std::optional<double> period;
    for (int k = static_cast<int>(0.1 * spu); k <= std::min(10 * spu, n / 3); ++k) {
        double sxy = 0, sxx = 0, syy = 0;
        for (int i = 0; i + k < n; ++i) {
            sxy += x[i] * x[i + k];
            sxx += x[i] * x[i];
            syy += x[i + k] * x[i + k];
        }
        if (sxx <= 0 || syy <= 0) continue;
        double c = sxy / std::sqrt(sxx * syy);
        if (c > best + 1e-9) {
            best = c;
            period = static_cast<double>(k) / spu;
        }
    }
    if (best < 0.9) return std::nullopt;
    return period;
}

}  // namespace

Verdict dixmier_verdict(const OperatorModel& model, const SweepOptions& o) {
    require_positive(model);
    Sweep s = sweep_range(model, o);
    Profile pv = dixmier_profile(model);
    Profile pu = pv.reframe(Coord::U);
    Verdict v = classify_windows(sweep(pu, s, o), o.thresholds, o.tail_windows);
    v.diagnostics["analyzer"] = "dixmier";
    v.diagnostics["sweep_u"] = {s.n_lo, s.n_hi + 1};
    v.diagnostics["t_midpoint_values"] = t_midpoints(pv, s);
    return v;
}

Verdict dp_verdict(const OperatorModel& model, const SweepOptions& o) {
    require_positive(model);
    Sweep s = sweep_range(model, o);
    const Thresholds& thr = o.thresholds;
    Profile S = dixmier_profile(model).reframe(Coord::U);
    nlohmann::ordered_json diag;
    diag["analyzer"] = "dp";
    diag["sweep_u"] = {s.n_lo, s.n_hi + 1};

    Verdict raw = classify_windows(sweep(S, s, o), thr, o.tail_windows);
    diag["raw_profile"] = kind_summary(raw);
    if (raw.kind == VerdictKind::Convergent) {
        raw.diagnostics.update(diag);
        raw.diagnostics["stage"] = "raw profile converges";
        return raw;
    }

    std::vector<double> horizons;
    int u_max = static_cast<int>(std::floor(s.u_top + 1e-9));
    for (int U = std::min(5, u_max); U <= u_max; ++U) horizons.push_back(U);
    Profile R = remainder_mu(model).reframe(Coord::U);
    VanishingResult van = vanishing_check(R, horizons, thr.vanishing);
    diag["vanishing_mu"] = {{"passes", van.passes},
                            {"fitted_c", van.fitted_c},
                            {"tail_increment", van.tail_increment},
                            {"final_average", van.averages.back()}};
    Profile residual = van.passes ? S.subtract(R) : S;
    diag["residual"] = van.passes ? "dixmier - remainder_mu" : "dixmier";

    Verdict res = classify_windows(sweep(residual, s, o), thr, o.tail_windows);
    diag["residual_profile"] = kind_summary(res);
    if (res.kind == VerdictKind::Convergent) {
        res.diagnostics.update(diag);
        res.diagnostics["stage"] = "residual converges";
        return res;
    }

    auto periodic = [&](double period) -> std::optional<Verdict> {
        int n1 = static_cast<int>(std::floor(s.u_top / period + 1e-9)) - 2;
        int n0 = std::max(static_cast<int>(std::ceil(s.n_lo / period)), n1 - 7);
        if (n1 < n0 + 1) return std::nullopt;
        PeriodicityResult pr = asymptotic_periodicity(residual, period, n0, n1, thr.periodicity);
        diag["periodicity"].push_back({{"period", period}, {"deviations", pr.deviations}, {"passes", pr.passes}});
        if (!pr.passes) return std::nullopt;
        PeriodicMean pm = periodic_mean(residual, period, thr.periodicity);
        Verdict v = res;
        v.kind = VerdictKind::PeriodicMean;
        v.value = Estimate{pm.value, pm.error};
        v.period = period;
        v.diagnostics = diag;
        v.diagnostics["stage"] = "periodic mean of residual";
        v.diagnostics["mean_window_u"] = {pm.window_start, pm.window_start + period};
        return v;
    };
    diag["periodicity"] = nlohmann::ordered_json::array();
    if (auto v = periodic(1.0)) return *v;
    if (auto cand = autocorrelation_period(residual, s.n_lo, s.u_top)) {
        if (std::abs(*cand - 1.0) > 1e-9) {
            if (auto v = periodic(*cand)) return *v;
        }
    }

    UcModulus uc = uc_modulus(residual, DD(s.n_lo), DD(s.u_top));
    diag["uc_modulus"] = {{"deltas", uc.deltas}, {"moduli", uc.moduli}, {"passes", uc.passes}};
    Verdict v = res;
    v.kind = VerdictKind::Inconclusive;
    v.value.reset();
    if (uc.passes) {
        double H = s.u_top - s.n_lo;
        std::vector<double> ws{H / 16, H / 8, H / 4, H / 2};
        SuchestonResult up = sucheston_upper(residual, DD(s.n_lo), DD(s.u_top), ws);
        SuchestonResult low = sucheston_upper(residual, DD(s.n_lo), DD(s.u_top), ws, 64, true);
        v.envelope = std::make_pair(low.bound, up.bound);
        diag["envelope_uncertainty"] = {low.uncertainty, up.uncertainty};
        diag["stage"] = "Sucheston envelope";
    } else {
        diag["stage"] = "no periodicity, not uniformly continuous";
    }
    v.diagnostics.update(diag);
    return v;
}

}  // namespace tracelab
