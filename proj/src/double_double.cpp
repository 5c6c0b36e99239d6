#include "tracelab/double_double.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <ios>
#include <limits>
#include <string>

#include "tracelab/error.hpp"

namespace tracelab {

namespace {

using Wide = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<160, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr int kTaylorTerms = 11;

struct InverseFactorials {
    DD c[kTaylorTerms + 1];
    InverseFactorials() {
        DD f(1.0);
        for (int n = 1; n <= kTaylorTerms; ++n) {
            f = f / static_cast<double>(n);
            c[n] = f;
        }
    }
};

// Taylor series of e^r - 1 for |r| <= 2^-9, Horner form.
DD expm1_taylor(DD r) {
    static const InverseFactorials inv;
    DD s = inv.c[kTaylorTerms];
    for (int n = kTaylorTerms - 1; n >= 1; --n) s = s * r + inv.c[n];
    return s * r;
}

}  // namespace

DD floor(DD x) {
    double fh = std::floor(x.hi());
    if (fh != x.hi()) return DD(fh);
    return DD::sum(fh, std::floor(x.lo()));
}

DD round(DD x) { return floor(x + 0.5); }

DD expm1(DD x) {
    if (!x.is_finite()) return x.hi() > 0 ? DD(kInf) : DD(-1.0);
    if (std::abs(x.hi()) > 0.5) return exp(x) - 1.0;
    if (x.hi() == 0.0 && x.lo() == 0.0) return x;
    int halvings = 0;
    DD r = x;
    while (std::abs(r.hi()) > 0x1p-9) {
        r = ldexp(r, -1);
        ++halvings;
    }
    DD e = expm1_taylor(r);
    for (int i = 0; i < halvings; ++i) e = e * (e + 2.0);
    return e;
}

DD exp(DD x) {
    if (x.hi() > 709.78) return DD(kInf);
    if (x.hi() < -745.2) return DD(0.0);
    if (std::abs(x.hi()) <= 0.5) return 1.0 + expm1(x);
    double k = std::nearbyint(x.hi() / dd_constants::ln2.hi());
    DD r = x - dd_constants::ln2 * k;
    DD e = 1.0 + expm1(r);
    // Split the scaling so ldexp never overflows on the way to a finite result.
    int ki = static_cast<int>(k);
    if (ki > 1000) return ldexp(ldexp(e, ki - 1000), 1000);
    if (ki < -1000) return ldexp(ldexp(e, ki + 1000), -1000);
    return ldexp(e, ki);
}

DD log(DD x) {
    if (x.hi() < 0.0 || (x.hi() == 0.0 && x.lo() < 0.0)) {
        return DD(std::numeric_limits<double>::quiet_NaN());
    }
    if (x.hi() == 0.0) return DD(-kInf);
    if (std::isinf(x.hi())) return DD(kInf);
    if (std::abs(std::log2(x.hi())) > 900.0) {
        int e = 0;
        std::frexp(x.hi(), &e);
        return log(ldexp(x, -e)) + dd_constants::ln2 * static_cast<double>(e);
    }
    DD z = std::log(x.hi()) + x.lo() / x.hi();
    // One Newton step on exp(z) = x doubles the 53 correct bits.
    return z + x * exp(-z) - 1.0;
}

DD log1p(DD x) {
    if (std::abs(x.hi()) >= 0.5) return log(1.0 + x);
    if (x.hi() == 0.0 && x.lo() == 0.0) return x;
    DD z = std::log1p(x.to_double());
    DD em = expm1(z);
    return z - (em - x) / (1.0 + em);
}

DD sqrt(DD x) {
    if (x.hi() <= 0.0) return DD(x.hi() == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
    double s0 = std::sqrt(x.hi());
    DD s2 = DD::product(s0, s0);
    return s0 + (x - s2) / (2.0 * s0);
}

DD log1mexp(DD x) {
    if (x.hi() == 0.0 && x.lo() == 0.0) return DD(-kInf);
    if (x > -dd_constants::ln2) return log(-expm1(x));
    return log1p(-exp(x));
}

DD log1pexp(DD x) {
    if (x.hi() > 0.0) return x + log1p(exp(-x));
    return log1p(exp(x));
}

DD DoubleDouble::parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ConfigError("empty decimal literal");
    Wide w;
    try {
        w = Wide(s);
    } catch (const std::exception&) {
        throw ConfigError("malformed decimal literal: '" + s + "'");
    }
    if (!boost::multiprecision::isfinite(w)) throw ConfigError("non-finite decimal literal: '" + s + "'");
    double hi = w.convert_to<double>();
    double lo = Wide(w - hi).convert_to<double>();
    return quick(hi, lo);
}

std::string DoubleDouble::to_string(int digits) const {
    if (!is_finite()) {
        if (std::isnan(hi_)) return "nan";
        return hi_ > 0 ? "inf" : "-inf";
    }
    Wide w = Wide(hi_) + Wide(lo_);
    return w.str(digits - 1, std::ios_base::scientific);
}

}  // namespace tracelab
