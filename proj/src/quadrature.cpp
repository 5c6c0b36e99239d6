#include "tracelab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tracelab/error.hpp"

namespace tracelab {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;

constexpr unsigned kMaxDepth = 3;
constexpr double kTol = 1e-13;
constexpr int kMaxLevels = 110;

QuadResult rule(const Profile& p, DD anchor, bool from_right, double s0, double s1) {
    double err = 0.0;
    auto f = [&](double s) {
        DD x = from_right ? anchor - DD(s) : anchor + DD(s);
        return p.at(x).to_double();
    };
    double v = Rule::integrate(f, s0, s1, kMaxDepth, kTol, &err);
    return {v, err};
}

// Integral over [x0, x1]; ends flagged as breaks are approached through
// dyadic shells [len 2^-(j+1), len 2^-j] measured from that end.
QuadResult segment(const Profile& p, DD x0, DD x1, bool refine_left, bool refine_right) {
    double len = (x1 - x0).to_double();
    if (!(len > 0.0)) return {};
    if (!refine_left && !refine_right) return rule(p, x0, false, 0.0, len);
    double scale = std::max({1.0, std::abs(x0.hi()), std::abs(x1.hi())});
    double floor_offset = scale * 1e-28;
    QuadResult total;
    auto shells = [&](DD anchor, bool from_right, double span) {
        double hi = span;
        for (int j = 0; j < kMaxLevels && hi > floor_offset; ++j) {
            double lo = hi * 0.5;
            QuadResult r = rule(p, anchor, from_right, lo, hi);
            total.value += r.value;
            total.error += r.error;
            hi = lo;
        }
        // Remaining sliver bounded by its width times the last sampled value.
        total.error += hi * std::abs(p.at(from_right ? anchor - DD(hi) : anchor + DD(hi)).to_double());
    };
    if (refine_left && refine_right) {
        shells(x0, false, len * 0.5);
        shells(x1, true, len * 0.5);
    } else if (refine_left) {
        shells(x0, false, len);
    } else {
        shells(x1, true, len);
    }
    return total;
}

}  // namespace

std::vector<QuadResult> cumulative_integral(const Profile& p, const std::vector<DD>& points) {
    std::vector<QuadResult> out(points.size());
    if (points.empty()) return out;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] < points[i - 1]) throw ConfigError("cumulative_integral: points must be ascending");
    }
    if (!std::isfinite(points.front().hi()) || !std::isfinite(points.back().hi())) {
        throw DomainTooSmall("integration bounds must be finite");
    }
    std::vector<DD> brk = p.breaks(points.front(), points.back());
    std::size_t bi = 0;
    QuadResult run;
    for (std::size_t i = 1; i < points.size(); ++i) {
        DD a = points[i - 1], b = points[i];
        while (bi < brk.size() && !(brk[bi] > a)) ++bi;
        bool left_is_break = std::binary_search(brk.begin(), brk.end(), a) || i == 1;
        DD cursor = a;
        bool cursor_break = left_is_break;
        while (bi < brk.size() && brk[bi] < b) {
            QuadResult r = segment(p, cursor, brk[bi], cursor_break, true);
            run.value += r.value;
            run.error += r.error;
            cursor = brk[bi];
            cursor_break = true;
            ++bi;
        }
        bool right_is_break = std::binary_search(brk.begin(), brk.end(), b) || i + 1 == points.size();
        QuadResult r = segment(p, cursor, b, cursor_break, right_is_break);
        run.value += r.value;
        run.error += r.error;
        out[i] = run;
    }
    return out;
}

QuadResult integrate(const Profile& p, DD a, DD b) {
    if (b < a) {
        QuadResult r = integrate(p, b, a);
        return {-r.value, r.error};
    }
    return cumulative_integral(p, {a, b}).back();
}

}  // namespace tracelab
