#include "tracelab/logreal.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "tracelab/error.hpp"

namespace tracelab {

namespace {

constexpr DD kLn10{2.302585092994045901e+00, -2.170756223382249351e-16};

// Below this gap in log-magnitude the smaller operand is invisible at
// working precision (e^-80 < 2^-106 / 4).
constexpr double kNegligibleGap = -80.0;

void check_range(DD logmag) {
    if (!logmag.is_finite() || std::abs(logmag.hi()) > kMaxLogmag) {
        throw LogRangeError("log-magnitude out of range: " + logmag.to_string(17));
    }
}

bool too_close(DD gap, DD reference) {
    double scale = std::max(1.0, std::abs(reference.hi()));
    return std::abs(gap.hi()) < 4.0 * kDDEpsilon * scale;
}

}  // namespace

LogReal LogReal::from_log(DD logmag, int sign) {
    LogReal r;
    if (sign == 0) return r;
    check_range(logmag);
    r.sign_ = static_cast<std::int8_t>(sign > 0 ? 1 : -1);
    r.logmag_ = logmag;
    return r;
}

LogReal LogReal::from_double(double x) {
    if (!std::isfinite(x)) throw NumericError("non-finite value cannot be represented");
    if (x == 0.0) return {};
    return from_log(log(DD(std::abs(x))), x > 0 ? 1 : -1);
}

LogReal LogReal::from_dd(DD x) {
    if (!x.is_finite()) throw NumericError("non-finite value cannot be represented");
    if (x.hi() == 0.0) return {};
    return from_log(log(tracelab::abs(x)), x.hi() > 0 ? 1 : -1);
}

double LogReal::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(logmag_.hi()) * (1.0 + logmag_.lo());
}

DD LogReal::to_dd() const {
    if (sign_ == 0) return DD(0.0);
    DD m = exp(logmag_);
    return sign_ > 0 ? m : -m;
}

LogReal operator+(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogReal& big = (a.logmag_ >= b.logmag_) ? a : b;
    const LogReal& small = (&big == &a) ? b : a;
    DD gap = small.logmag_ - big.logmag_;  // <= 0
    if (gap.hi() < kNegligibleGap) return big;
    if (a.sign_ == b.sign_) {
        return LogReal::from_log(big.logmag_ + log1p(exp(gap)), big.sign_);
    }
    if (gap.hi() == 0.0 && gap.lo() == 0.0) return {};
    if (too_close(gap, big.logmag_)) {
        throw CancellationUnderflow("opposite-signed operands agree beyond working precision (log gap " +
                                    gap.to_string(6) + ")");
    }
    return LogReal::from_log(big.logmag_ + log1mexp(gap), big.sign_);
}

LogReal operator*(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    return LogReal::from_log(a.logmag_ + b.logmag_, a.sign_ * b.sign_);
}

LogReal operator/(const LogReal& a, const LogReal& b) {
    if (b.sign_ == 0) throw DivisionByZero("LogReal division by zero");
    if (a.sign_ == 0) return {};
    return LogReal::from_log(a.logmag_ - b.logmag_, a.sign_ * b.sign_);
}

std::strong_ordering operator<=>(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0 || a.logmag_ == b.logmag_) return std::strong_ordering::equal;
    bool mag_less = a.logmag_ < b.logmag_;
    if (a.sign_ > 0) return mag_less ? std::strong_ordering::less : std::strong_ordering::greater;
    return mag_less ? std::strong_ordering::greater : std::strong_ordering::less;
}

LogReal pow(const LogReal& a, DD p) {
    if (a.is_zero()) {
        if (p.hi() > 0.0) return LogReal::zero();
        if (p.hi() == 0.0 && p.lo() == 0.0) return LogReal::one();
        throw DivisionByZero("zero raised to a negative power");
    }
    int sign = 1;
    if (a.sign() < 0) {
        if (!(floor(p) == p)) throw NegativeBasePow("negative base with non-integral exponent");
        DD half = ldexp(p, -1);
        if (!(floor(half) == half)) sign = -1;
    }
    return LogReal::from_log(a.logmag() * p, sign);
}

LogReal exp_to_logreal(DD x) { return LogReal::from_log(x); }

DD log_difference(DD log_a, DD log_b) {
    DD gap = log_b - log_a;
    if (gap.hi() > 0.0 || (gap.hi() == 0.0 && gap.lo() >= 0.0) || too_close(gap, log_a)) {
        throw CancellationUnderflow("difference of nearly equal magnitudes (log gap " + gap.to_string(6) + ")");
    }
    return log_a + log1mexp(gap);
}

std::string LogReal::encode() const {
    if (sign_ == 0) return "0";
    return (sign_ > 0 ? "+" : "-") + logmag_.to_string(34);
}

LogReal LogReal::decode(std::string_view text) {
    if (text == "0") return {};
    if (text.size() < 2 || (text[0] != '+' && text[0] != '-')) {
        throw ConfigError("malformed LogReal encoding: '" + std::string(text) + "'");
    }
    return from_log(DD::parse(text.substr(1)), text[0] == '+' ? 1 : -1);
}

std::string to_scientific(const LogReal& x, int digits) {
    if (x.is_zero()) return "0";
    DD l10 = x.logmag() / kLn10;
    DD e10 = floor(l10);
    double mant = exp((l10 - e10) * kLn10).to_double();
    long long exponent = static_cast<long long>(e10.to_double());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, mant);
    // snprintf may round the mantissa up to 10.0; renormalise via its own exponent.
    std::string s(buf);
    auto epos = s.find('e');
    long long local = std::stoll(s.substr(epos + 1));
    std::string out = (x.sign() < 0 ? "-" : "") + s.substr(0, epos);
    long long total = exponent + local;
    std::snprintf(buf, sizeof buf, "e%c%02lld", total < 0 ? '-' : '+', total < 0 ? -total : total);
    return out + buf;
}

}  // namespace tracelab
