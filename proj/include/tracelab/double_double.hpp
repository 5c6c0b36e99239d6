#pragma once

#include <cmath>
#include <compare>
#include <string>
#include <string_view>

namespace tracelab {

/**
 * Unevaluated sum of two doubles, hi + lo with |lo| <= ulp(hi)/2.
 *
 * Gives roughly 106 bits (~31 decimal digits) of significand over the
 * native double exponent range.  Only the operations the log-domain kernel
 * needs are provided; transcendental functions are accurate to a few units
 * in the last compensated place.
 */
class DoubleDouble {
public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT(implicit)
    constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    constexpr double to_double() const { return hi_ + lo_; }

    bool is_finite() const { return std::isfinite(hi_) && std::isfinite(lo_); }

    /// Exact sum of two doubles.
    static DoubleDouble sum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }

    /// Exact product of two doubles.
    static DoubleDouble product(double a, double b) {
        double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    friend DoubleDouble operator-(DoubleDouble x) { return {-x.hi_, -x.lo_}; }

    friend DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
        DoubleDouble s = sum(a.hi_, b.hi_);
        DoubleDouble t = sum(a.lo_, b.lo_);
        double lo = s.lo_ + t.hi_;
        s = quick(s.hi_, lo);
        lo = s.lo_ + t.lo_;
        return quick(s.hi_, lo);
    }
    friend DoubleDouble operator+(DoubleDouble a, double b) {
        DoubleDouble s = sum(a.hi_, b);
        return quick(s.hi_, s.lo_ + a.lo_);
    }
    friend DoubleDouble operator+(double a, DoubleDouble b) { return b + a; }
    friend DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
    friend DoubleDouble operator-(DoubleDouble a, double b) { return a + (-b); }
    friend DoubleDouble operator-(double a, DoubleDouble b) { return (-b) + a; }

    friend DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
        DoubleDouble p = product(a.hi_, b.hi_);
        double lo = p.lo_ + (a.hi_ * b.lo_ + a.lo_ * b.hi_);
        return quick(p.hi_, lo);
    }
    friend DoubleDouble operator*(DoubleDouble a, double b) {
        DoubleDouble p = product(a.hi_, b);
        return quick(p.hi_, p.lo_ + a.lo_ * b);
    }
    friend DoubleDouble operator*(double a, DoubleDouble b) { return b * a; }

    friend DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
        double q1 = a.hi_ / b.hi_;
        DoubleDouble r = a - b * q1;
        double q2 = r.hi_ / b.hi_;
        r = r - b * q2;
        double q3 = r.hi_ / b.hi_;
        return quick(q1, q2) + q3;
    }
    friend DoubleDouble operator/(DoubleDouble a, double b) { return a / DoubleDouble(b); }
    friend DoubleDouble operator/(double a, DoubleDouble b) { return DoubleDouble(a) / b; }

    DoubleDouble& operator+=(DoubleDouble o) { return *this = *this + o; }
    DoubleDouble& operator-=(DoubleDouble o) { return *this = *this - o; }
    DoubleDouble& operator*=(DoubleDouble o) { return *this = *this * o; }
    DoubleDouble& operator/=(DoubleDouble o) { return *this = *this / o; }

    friend bool operator==(DoubleDouble a, DoubleDouble b) {
        return a.hi_ == b.hi_ && a.lo_ == b.lo_;
    }
    friend std::partial_ordering operator<=>(DoubleDouble a, DoubleDouble b) {
        if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
        return a.lo_ <=> b.lo_;
    }

    /// Parses a decimal literal (with optional exponent) to nearest.
    static DoubleDouble parse(std::string_view text);

    /// Scientific notation with `digits` significant digits (default 34,
    /// which round-trips through parse()).
    std::string to_string(int digits = 34) const;

private:
    static DoubleDouble quick(double a, double b) {
        double s = a + b;
        return {s, b - (s - a)};
    }

    double hi_ = 0.0;
    double lo_ = 0.0;
};

using DD = DoubleDouble;

inline DD abs(DD x) { return x.hi() < 0.0 || (x.hi() == 0.0 && x.lo() < 0.0) ? -x : x; }
inline DD ldexp(DD x, int e) { return {std::ldexp(x.hi(), e), std::ldexp(x.lo(), e)}; }
DD floor(DD x);
DD round(DD x);

DD exp(DD x);
DD expm1(DD x);
DD log(DD x);
DD log1p(DD x);
DD sqrt(DD x);

/// log(1 - e^x) for x < 0, without forming 1 - e^x when x is near 0.
DD log1mexp(DD x);
/// log(1 + e^x), stable for large |x|.
DD log1pexp(DD x);

namespace dd_constants {
inline constexpr DD ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline constexpr DD e{2.718281828459045091e+00, 1.445646891729250158e-16};
inline constexpr DD pi{3.141592653589793116e+00, 1.224646799147353207e-16};
}  // namespace dd_constants

/// Relative spacing of the compensated format, 2^-104.
inline constexpr double kDDEpsilon = 4.93038065763132e-32;

}  // namespace tracelab
