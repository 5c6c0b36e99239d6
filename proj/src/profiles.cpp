#include "tracelab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracelab/error.hpp"
#include "tracelab/quadrature.hpp"

namespace tracelab {

namespace {

const DD kVLow(-700.0);
const DD kInf(std::numeric_limits<double>::infinity());

DD v_high(const OperatorModel& m) { return m.horizon_log ? *m.horizon_log : kInf; }

void require_zero_tail(const OperatorModel& m, const char* what) {
    if (!m.mu.tail().is_zero()) throw DivergentTail(std::string(what) + ": mu has a nonzero tail");
}

Profile::BreakFinder knot_breaks(const StepFunction& mu) {
    return [mu](DD a, DD b) {
        auto k = mu.knots();
        auto lo = std::lower_bound(k.begin(), k.end(), a);
        auto hi = std::upper_bound(lo, k.end(), b);
        return std::vector<DD>(lo, hi);
    };
}

// Scales v = -log(value) at which the distribution function d(1/t) jumps.
std::shared_ptr<const std::vector<DD>> level_breaks(const StepFunction& mu) {
    auto out = std::make_shared<std::vector<DD>>();
    for (const LogReal& x : mu.values()) {
        if (!x.is_zero()) out->push_back(-x.logmag());
    }
    std::sort(out->begin(), out->end());
    out->erase(std::unique(out->begin(), out->end()), out->end());
    return out;
}

// int_0^{d(s)} mu for s > 0: the prefix through the last piece above s.
LogReal integral_above(const StepFunction& mu, const LogReal& s) {
    std::size_t count = mu.pieces_above(s);
    if (count == 0) return LogReal::zero();
    if (count == mu.pieces() && mu.tail() > s) throw DivergentTail("distribution: tail exceeds threshold");
    return mu.integral_through(count - 1);
}

}  // namespace

LogReal log1p_scale(DD v) { return LogReal::from_dd(log1pexp(v)); }

Profile dixmier_profile(const OperatorModel& model) {
    require_zero_tail(model, "dixmier_profile");
    StepFunction mu = model.mu;
    auto f = [mu](DD v) { return mu.integral(v) / log1p_scale(v); };
    return Profile::closed_form(Coord::V, f, kVLow, v_high(model), knot_breaks(mu), "dixmier:" + model.label);
}

Profile truncated_profile(const OperatorModel& model) {
    require_zero_tail(model, "truncated_profile");
    StepFunction mu = model.mu;
    auto f = [mu](DD v) { return integral_above(mu, LogReal::from_log(-v)) / log1p_scale(v); };
    return Profile::closed_form(Coord::V, f, kVLow, v_high(model), sorted_breaks(level_breaks(mu)),
                                "truncated:" + model.label);
}

Profile remainder_mu(const OperatorModel& model) {
    StepFunction mu = model.mu;
    auto f = [mu](DD v) { return LogReal::from_log(v) * mu.eval(v) / log1p_scale(v); };
    return Profile::closed_form(Coord::V, f, kVLow, v_high(model), knot_breaks(mu), "remainder_mu:" + model.label);
}

Profile remainder_d(const OperatorModel& model) {
    StepFunction mu = model.mu;
    auto f = [mu](DD v) {
        return mu.distribution(LogReal::from_log(-v)) / LogReal::from_log(v) / log1p_scale(v);
    };
    return Profile::closed_form(Coord::V, f, kVLow, v_high(model), sorted_breaks(level_breaks(mu)),
                                "remainder_d:" + model.label);
}

Profile zeta_profile(const OperatorModel& model) {
    require_zero_tail(model, "zeta_profile");
    StepFunction mu = model.mu;
    auto f = [mu](DD r) {
        if (!(r > DD(0.0))) throw DomainTooSmall("zeta_profile: r must be positive");
        return mu.power_integral(DD(1.0) + DD(1.0) / r) / LogReal::from_dd(r);
    };
    DD hi = model.horizon_log ? *model.horizon_log / 30.0 : kInf;
    Profile p = Profile::closed_form(Coord::V, f, DD(1e-6), hi, std::vector<DD>{}, "zeta:" + model.label);
    p.set_native_label("r");
    return p;
}

Profile beta_profile(const OperatorModel& model) {
    require_zero_tail(model, "beta_profile");
    StepFunction mu = model.mu;
    auto f = [mu](DD s) {
        if (!(s > DD(0.0))) throw DomainTooSmall("beta_profile: s must be positive");
        return integral_above(mu, LogReal::from_log(-s)) / LogReal::from_dd(s);
    };
    DD hi = kInf;
    if (model.horizon_log) {
        // Faithful while e^-s stays above the smallest plateau the model
        // carries below the horizon.
        LogReal last = mu.eval(*model.horizon_log - abs(*model.horizon_log) * 1e-20 - 1e-300);
        if (last.is_zero()) throw ModelError("beta_profile: mu vanishes before the horizon");
        hi = -last.logmag();
    }
    Profile p = Profile::closed_form(Coord::V, f, DD(1e-6), hi, sorted_breaks(level_breaks(mu)), "beta:" + model.label);
    p.set_native_label("s");
    return p;
}

Profile cesaro(const Profile& p, DD x_end, int spu) {
    if (spu < 16) throw GridTooCoarse("cesaro: at least 16 samples per unit are required (got " + std::to_string(spu) + ")");
    if (!(x_end > DD(0.0))) throw DomainTooSmall("cesaro: the averaging range must be positive");
    const std::size_t n = static_cast<std::size_t>(std::ceil(x_end.to_double() * spu)) + 1;
    const DD step = x_end / static_cast<double>(n - 1);
    std::vector<DD> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = step * static_cast<double>(i);
    grid.back() = x_end;
    if (!p.contains(grid.front()) || !p.contains(grid.back())) {
        throw DomainTooSmall("cesaro: profile must be evaluable on [0, " + x_end.to_string(6) + "]");
    }
    std::vector<DD> out(n);
    double err = p.error_estimate();
    out[0] = p.at(DD(0.0)).to_dd();
    if (p.is_closed_form()) {
        auto cum = cumulative_integral(p, grid);
        double worst = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            out[i] = DD(cum[i].value) / grid[i];
            worst = std::max(worst, cum[i].error / grid[i].to_double());
        }
        err += worst;
    } else {
        double own_spu = 1.0 / p.step().to_double();
        if (own_spu < 16.0) throw GridTooCoarse("cesaro: sampled input has fewer than 16 samples per unit");
        DD run(0.0);
        DD prev = out[0];
        double curvature = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            DD cur = p.at(grid[i]).to_dd();
            run += (prev + cur) * step * 0.5;
            out[i] = run / grid[i];
            if (i + 1 < n) {
                DD next = p.at(grid[i + 1]).to_dd();
                curvature = std::max(curvature, std::abs((next - cur * 2.0 + prev).to_double()));
            }
            prev = cur;
        }
        // Trapezoid error per unit length: step^2 f''/12 with f'' ~ second difference / step^2.
        err += curvature / 12.0;
    }
    return Profile::sampled(p.coord(), DD(0.0), step, std::move(out), "cesaro(" + p.provenance() + ")", err);
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Circle:
            return "circle";
        case Region::RectUnion:
            return "rect";
        case Region::ReOnly:
            return "re";
        case Region::ImOnly:
            return "im";
    }
    return "?";
}

Region parse_region(const std::string& name) {
    if (name == "circle") return Region::Circle;
    if (name == "rect" || name == "rect-union") return Region::RectUnion;
    if (name == "re" || name == "re-only") return Region::ReOnly;
    if (name == "im" || name == "im-only") return Region::ImOnly;
    throw ConfigError("unknown region '" + name + "' (expected circle, rect, re or im)");
}

namespace {

LidskiiTable::Order build_order(const SpectrumModel& s, double (*key)(std::complex<double>), bool take_re,
                                bool take_im) {
    std::vector<Eigenvalue> ev = s.eigenvalues();
    std::stable_sort(ev.begin(), ev.end(),
                     [key](const Eigenvalue& a, const Eigenvalue& b) { return key(a.value) > key(b.value); });
    LidskiiTable::Order o;
    DD re(0.0), im(0.0);
    std::int64_t c = 0;
    for (const auto& e : ev) {
        double m = static_cast<double>(e.multiplicity);
        if (take_re) re += DD::product(e.value.real(), m);
        if (take_im) im += DD::product(e.value.imag(), m);
        c += e.multiplicity;
        o.keys.push_back(key(e.value));
        o.re.push_back(re);
        o.im.push_back(im);
        o.count.push_back(c);
    }
    return o;
}

// Number of leading entries whose key exceeds 1/t = e^-v (strictly).
std::size_t above(const LidskiiTable::Order& o, DD threshold) {
    return static_cast<std::size_t>(
        std::partition_point(o.keys.begin(), o.keys.end(), [&](double k) { return DD(k) > threshold; }) -
        o.keys.begin());
}

}  // namespace

LidskiiTable::LidskiiTable(const SpectrumModel& spectrum)
    : circle_(build_order(spectrum, [](std::complex<double> z) { return std::abs(z); }, true, true)),
      rect_(build_order(
          spectrum, [](std::complex<double> z) { return std::max(std::abs(z.real()), std::abs(z.imag())); }, true,
          true)),
      re_(build_order(spectrum, [](std::complex<double> z) { return std::abs(z.real()); }, true, false)),
      im_(build_order(spectrum, [](std::complex<double> z) { return std::abs(z.imag()); }, false, true)) {}

LidskiiSums LidskiiTable::at(DD v) const {
    DD thr = exp(-v);
    LidskiiSums s;
    if (std::size_t n = above(circle_, thr)) {
        s.circle_re = circle_.re[n - 1];
        s.circle_im = circle_.im[n - 1];
        s.d_t = circle_.count[n - 1];
    }
    if (std::size_t n = above(rect_, thr)) {
        s.rect_re = rect_.re[n - 1];
        s.rect_im = rect_.im[n - 1];
    }
    if (std::size_t n = above(re_, thr)) {
        s.re_only = re_.re[n - 1];
        s.d_re = re_.count[n - 1];
    }
    if (std::size_t n = above(im_, thr)) {
        s.im_only = im_.im[n - 1];
        s.d_im = im_.count[n - 1];
    }
    return s;
}

std::vector<DD> LidskiiTable::jumps(Region r) const {
    const Order& o = r == Region::Circle ? circle_ : r == Region::RectUnion ? rect_ : r == Region::ReOnly ? re_ : im_;
    std::vector<DD> out;
    for (auto it = o.keys.rbegin(); it != o.keys.rend(); ++it) {
        if (*it > 0.0) out.push_back(-log(DD(*it)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<Profile, Profile> lidskii_profile(const SpectrumModel& spectrum, Region region) {
    auto table = std::make_shared<const LidskiiTable>(spectrum);
    auto pick = [table, region](DD v, bool real) {
        LidskiiSums s = table->at(v);
        DD num;
        switch (region) {
            case Region::Circle:
                num = real ? s.circle_re : s.circle_im;
                break;
            case Region::RectUnion:
                num = real ? s.rect_re : s.rect_im;
                break;
            case Region::ReOnly:
                num = real ? s.re_only : DD(0.0);
                break;
            case Region::ImOnly:
                num = real ? DD(0.0) : s.im_only;
                break;
        }
        return LogReal::from_dd(num) / log1p_scale(v);
    };
    std::vector<DD> jumps = table->jumps(region);
    std::string tag = std::string("lidskii_") + region_name(region);
    Profile re = Profile::closed_form(
        Coord::V, [pick](DD v) { return pick(v, true); }, kVLow, kInf, jumps, tag + ".re");
    Profile im = Profile::closed_form(
        Coord::V, [pick](DD v) { return pick(v, false); }, kVLow, kInf, jumps, tag + ".im");
    return {re, im};
}

}  // namespace tracelab
