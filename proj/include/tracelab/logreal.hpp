#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "tracelab/double_double.hpp"

namespace tracelab {

/// Bound on |logmag| for every non-zero LogReal.
inline constexpr double kMaxLogmag = 1e18;

/**
 * Signed extended-range real stored as sign * exp(logmag).
 *
 * The log-magnitude is a DoubleDouble, so values such as exp(k - e^k) at
 * k = 40 keep ~15 significant digits of the value itself and ratios of
 * such quantities keep far more.  Zero is represented by sign 0 only;
 * there is no signed zero and no NaN.
 */
class LogReal {
public:
    constexpr LogReal() = default;

    static constexpr LogReal zero() { return {}; }
    static LogReal one() { return from_log(DD(0.0)); }
    /// sign * exp(logmag); sign must be -1, 0 or +1.
    static LogReal from_log(DD logmag, int sign = 1);
    static LogReal from_double(double x);
    static LogReal from_dd(DD x);

    int sign() const { return sign_; }
    /// Meaningless (returned as 0) when the value is zero.
    DD logmag() const { return logmag_; }
    bool is_zero() const { return sign_ == 0; }
    bool is_positive() const { return sign_ > 0; }

    /// Nearest double; saturates to +-inf / 0 outside the native range.
    double to_double() const;
    DD to_dd() const;

    LogReal operator-() const {
        LogReal r = *this;
        r.sign_ = static_cast<std::int8_t>(-r.sign_);
        return r;
    }
    LogReal abs() const {
        LogReal r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    friend LogReal operator+(const LogReal& a, const LogReal& b);
    friend LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }
    friend LogReal operator*(const LogReal& a, const LogReal& b);
    friend LogReal operator/(const LogReal& a, const LogReal& b);
    LogReal& operator+=(const LogReal& o) { return *this = *this + o; }
    LogReal& operator-=(const LogReal& o) { return *this = *this - o; }
    LogReal& operator*=(const LogReal& o) { return *this = *this * o; }
    LogReal& operator/=(const LogReal& o) { return *this = *this / o; }

    friend bool operator==(const LogReal& a, const LogReal& b) {
        return a.sign_ == b.sign_ && (a.sign_ == 0 || a.logmag_ == b.logmag_);
    }
    friend std::strong_ordering operator<=>(const LogReal& a, const LogReal& b);

    /// "0" for zero, otherwise a sign character followed by the logmag in
    /// 34-digit scientific notation, e.g. "+-3.0000...e+00" for e^-3.
    std::string encode() const;
    static LogReal decode(std::string_view text);

private:
    std::int8_t sign_ = 0;
    DD logmag_{};
};

LogReal pow(const LogReal& a, DD p);
inline LogReal pow(const LogReal& a, double p) { return pow(a, DD(p)); }
LogReal exp_to_logreal(DD x);

/// a - b for 0 < b <= a given only their logs, as log(a - b).  Raises
/// CancellationUnderflow when the difference is below working precision.
DD log_difference(DD log_a, DD log_b);

/// Value in scientific decimal notation with arbitrary exponent width,
/// digits significant digits.  Works far outside the double range.
std::string to_scientific(const LogReal& x, int digits = 17);

}  // namespace tracelab
