#include "tracelab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tracelab/error.hpp"
#include "tracelab/parallel.hpp"

namespace tracelab {

namespace {

const DD kNegInf(-std::numeric_limits<double>::infinity());
const DD kPosInf(std::numeric_limits<double>::infinity());

bool is_neg_inf(DD x) { return std::isinf(x.hi()) && x.hi() < 0; }
bool is_pos_inf(DD x) { return std::isinf(x.hi()) && x.hi() > 0; }

DD to_v(DD x, Coord from) {
    switch (from) {
        case Coord::V:
            return x;
        case Coord::T:
            if (x < DD(0.0)) throw DomainTooSmall("t must be nonnegative");
            return log(x);
        case Coord::U:
            if (is_neg_inf(x)) return DD(0.0);
            return exp(x);
    }
    return x;
}

DD from_v(DD v, Coord to) {
    switch (to) {
        case Coord::V:
            return v;
        case Coord::T:
            if (is_neg_inf(v)) return DD(0.0);
            return exp(v);
        case Coord::U:
            if (v.hi() <= 0.0) {
                if (v.hi() == 0.0 && v.lo() == 0.0) return kNegInf;
                throw DomainTooSmall("u = log log t needs t > 1");
            }
            return log(v);
    }
    return v;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

const char* coord_name(Coord c) {
    switch (c) {
        case Coord::T:
            return "t";
        case Coord::V:
            return "v";
        case Coord::U:
            return "u";
    }
    return "?";
}

Coord parse_coord(const std::string& name) {
    if (name == "t") return Coord::T;
    if (name == "v") return Coord::V;
    if (name == "u") return Coord::U;
    throw ConfigError("unknown coordinate '" + name + "' (expected t, v or u)");
}

DD convert(DD x, Coord from, Coord to) {
    if (from == to) return x;
    return from_v(to_v(x, from), to);
}

Profile::BreakFinder sorted_breaks(std::shared_ptr<const std::vector<DD>> points) {
    return [points](DD a, DD b) {
        auto lo = std::lower_bound(points->begin(), points->end(), a);
        auto hi = std::upper_bound(lo, points->end(), b);
        return std::vector<DD>(lo, hi);
    };
}

Profile Profile::closed_form(Coord native, Evaluator f, DD lo, DD hi, BreakFinder breaks, std::string provenance,
                             double error) {
    if (!(lo < hi)) throw DomainTooSmall("profile domain is empty");
    Profile p;
    p.view_ = native;
    p.closed_ = std::make_shared<const Closed>(Closed{native, std::move(f), lo, hi, std::move(breaks), {}});
    p.provenance_ = std::move(provenance);
    p.error_ = error;
    p.refresh_domain();
    return p;
}

Profile Profile::closed_form(Coord native, Evaluator f, DD lo, DD hi, std::vector<DD> breaks, std::string provenance,
                             double error) {
    std::sort(breaks.begin(), breaks.end());
    return closed_form(native, std::move(f), lo, hi,
                       sorted_breaks(std::make_shared<const std::vector<DD>>(std::move(breaks))),
                       std::move(provenance), error);
}

Profile Profile::sampled(Coord coord, DD start, DD step, std::vector<DD> samples, std::string provenance,
                         double error) {
    if (!(step > DD(0.0))) throw ConfigError("sampled profile: step must be positive");
    if (samples.size() < 2) throw ConfigError("sampled profile: at least two samples are required");
    Profile p;
    p.view_ = coord;
    p.sampled_ = std::make_shared<const Sampled>(Sampled{start, step, std::move(samples)});
    p.provenance_ = std::move(provenance);
    p.error_ = error;
    p.refresh_domain();
    return p;
}

std::string Profile::coord_label() const {
    if (closed_ && !closed_->label.empty() && closed_->native == view_) return closed_->label;
    return coord_name(view_);
}

Profile& Profile::set_native_label(std::string label) {
    if (!closed_) throw ConfigError("native labels apply to closed-form profiles");
    auto c = std::make_shared<Closed>(*closed_);
    c->label = std::move(label);
    closed_ = std::move(c);
    refresh_domain();
    return *this;
}

DD Profile::to_native(DD x) const { return convert(x, view_, closed_->native); }

DD Profile::from_native(DD x) const {
    if (view_ == Coord::U && closed_->native != Coord::U) {
        DD v = to_v(x, closed_->native);
        if (v.hi() <= 0.0) return kNegInf;
        return log(v);
    }
    return convert(x, closed_->native, view_);
}

void Profile::refresh_domain() {
    if (sampled_) {
        lo_ = sampled_->start;
        hi_ = sampled_->start + sampled_->step * static_cast<double>(sampled_->samples.size() - 1);
        return;
    }
    lo_ = from_native(closed_->lo);
    hi_ = is_pos_inf(closed_->hi) ? kPosInf : from_native(closed_->hi);
}

bool Profile::contains(DD x) const { return !(x < lo()) && !(x > hi()); }

LogReal Profile::at(DD x) const {
    if (!contains(x)) {
        throw DomainTooSmall(provenance_ + ": " + coord_label() + " = " + fmt17(x.to_double()) +
                             " is outside the profile domain");
    }
    if (closed_) return closed_->f(to_native(x));
    const Sampled& s = *sampled_;
    DD pos = (x - s.start) / s.step;
    double fi = std::floor(pos.to_double());
    std::size_t i = static_cast<std::size_t>(std::max(0.0, fi));
    if (i >= s.samples.size() - 1) i = s.samples.size() - 2;
    DD w = pos - static_cast<double>(i);
    return LogReal::from_dd(s.samples[i] + (s.samples[i + 1] - s.samples[i]) * w);
}

std::vector<DD> Profile::breaks(DD a, DD b) const {
    if (!closed_) return {};
    DD na = is_neg_inf(a) ? closed_->lo : to_native(std::max(a, lo()));
    DD nb = to_native(std::min(b, hi()));
    std::vector<DD> out;
    for (DD x : closed_->breaks(na, nb)) {
        DD y = from_native(x);
        if (!is_neg_inf(y)) out.push_back(y);
    }
    return out;
}

Profile Profile::reframe(Coord c) const {
    if (c == view_) return *this;
    if (closed_) {
        DD v_hi = to_v(closed_->hi, closed_->native);
        if (c == Coord::U && !(v_hi > DD(0.0))) throw DomainTooSmall("reframe to u: profile lives at t <= 1");
        if (c == Coord::T && to_v(closed_->lo, closed_->native) > DD(709.0)) {
            throw DomainTooSmall("reframe to t: scales exceed the native double range");
        }
        Profile p = *this;
        p.view_ = c;
        p.refresh_domain();
        return p;
    }
    // Resample with the same number of points over the mapped domain.
    const Sampled& s = *sampled_;
    const std::size_t n = s.samples.size();
    DD a = lo(), b = hi();
    if (c == Coord::U) {
        DD va = to_v(a, view_);
        if (!(to_v(b, view_) > DD(0.0))) throw DomainTooSmall("reframe to u: profile lives at t <= 1");
        if (!(va > DD(0.0))) {
            std::size_t first = 0;
            while (first < n && !(to_v(s.start + s.step * static_cast<double>(first), view_) > DD(0.0))) ++first;
            if (first + 1 >= n) throw DomainTooSmall("reframe to u: fewer than two samples at t > 1");
            a = s.start + s.step * static_cast<double>(first);
        }
    }
    DD na = convert(a, view_, c), nb = convert(b, view_, c);
    DD nstep = (nb - na) / static_cast<double>(n - 1);
    std::vector<DD> out(n);
    double max_second = 0.0, max_ratio = 0.0;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        max_second = std::max(max_second, std::abs((s.samples[i + 2] - s.samples[i + 1] * 2.0 + s.samples[i]).to_double()));
    }
    DD prev_old = a;
    for (std::size_t i = 0; i < n; ++i) {
        DD x = i + 1 == n ? nb : na + nstep * static_cast<double>(i);
        DD old = i == 0 ? a : (i + 1 == n ? b : convert(x, c, view_));
        old = std::clamp(old, a, b);
        out[i] = at(old).to_dd();
        if (i > 0) max_ratio = std::max(max_ratio, ((old - prev_old) / s.step).to_double());
        prev_old = old;
    }
    double interp = 0.125 * max_second * std::max(1.0, max_ratio * max_ratio);
    return sampled(c, na, nstep, std::move(out), provenance_, error_ + interp);
}

Profile Profile::translate(DD a) const {
    if (sampled_) {
        Profile p = *this;
        p.sampled_ = std::make_shared<const Sampled>(Sampled{sampled_->start - a, sampled_->step, sampled_->samples});
        p.refresh_domain();
        return p;
    }
    Profile base = *this;
    Coord c = view_;
    auto f = [base, a](DD x) { return base.at(x + a); };
    auto br = [base, a](DD lo, DD hi) {
        std::vector<DD> out = base.breaks(lo + a, hi + a);
        for (auto& x : out) x -= a;
        return out;
    };
    DD lo_ = is_neg_inf(lo()) ? lo() : lo() - a;
    DD hi_ = is_pos_inf(hi()) ? hi() : hi() - a;
    Profile p = closed_form(c, f, lo_, hi_, br, provenance_, error_);
    return p;
}

Profile Profile::exponentiate(DD a) const {
    if (!closed_) throw ConfigError("exponentiate: closed-form profile required");
    if (!(a > DD(0.0))) throw ConfigError("exponentiate: exponent must be positive");
    Profile base = reframe(Coord::V);
    auto f = [base, a](DD v) { return base.at(v * a); };
    auto br = [base, a](DD lo, DD hi) {
        std::vector<DD> out = base.breaks(lo * a, hi * a);
        for (auto& x : out) x /= a;
        return out;
    };
    DD lo_ = is_neg_inf(base.lo()) ? base.lo() : base.lo() / a;
    DD hi_ = is_pos_inf(base.hi()) ? base.hi() : base.hi() / a;
    Profile p = closed_form(Coord::V, f, lo_, hi_, br, provenance_, error_);
    return p.view_ == view_ ? p : p.reframe(view_);
}

Profile Profile::dilate(DD beta) const {
    if (!closed_) throw ConfigError("dilate: closed-form profile required");
    if (!(beta > DD(0.0))) throw ConfigError("dilate: beta must be positive");
    Profile v = reframe(Coord::V).translate(log(beta));
    return v.reframe(view_);
}

Profile Profile::subtract(const Profile& other) const {
    if (!closed_ || !other.closed_) throw ConfigError("subtract: closed-form profiles required");
    Profile a = reframe(Coord::V), b = other.reframe(Coord::V);
    auto f = [a, b](DD v) {
        LogReal x = a.at(v), y = b.at(v);
        try {
            return x - y;
        } catch (const CancellationUnderflow&) {
            // Operands agree to working precision.
            return LogReal::zero();
        }
    };
    auto br = [a, b](DD lo, DD hi) {
        std::vector<DD> out = a.breaks(lo, hi), more = b.breaks(lo, hi);
        out.insert(out.end(), more.begin(), more.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    DD lo_ = std::max(a.lo(), b.lo()), hi_ = std::min(a.hi(), b.hi());
    Profile p = closed_form(Coord::V, f, lo_, hi_, br, provenance_ + " - " + other.provenance_,
                            error_ + other.error_);
    return p.reframe(view_);
}

Profile Profile::sample(DD start, DD step, std::size_t n) const {
    std::vector<DD> out(n);
    Profile self = *this;
    parallel_for(n, [&](std::size_t i) { out[i] = self.at(start + step * static_cast<double>(i)).to_dd(); });
    return sampled(view_, start, step, std::move(out), provenance_, error_);
}

void write_csv_header(std::ostream& out) { out << "coord_name,coord_value,value,value_logmag,provenance\n"; }

std::string csv_row(const Profile& p, DD x, const LogReal& value) {
    std::string logmag = value.is_zero() ? "-inf" : fmt17(value.logmag().to_double());
    std::string prov = p.provenance();
    std::replace(prov.begin(), prov.end(), ',', ';');
    return p.coord_label() + "," + fmt17(x.to_double()) + "," + to_scientific(value, 17) + "," + logmag + "," + prov +
           "\n";
}

void write_csv(std::ostream& out, const Profile& p, const std::vector<DD>& points) {
    std::vector<LogReal> values(points.size());
    parallel_for(points.size(), [&](std::size_t i) { values[i] = p.at(points[i]); });
    write_csv_header(out);
    for (std::size_t i = 0; i < points.size(); ++i) out << csv_row(p, points[i], values[i]);
}

}  // namespace tracelab
