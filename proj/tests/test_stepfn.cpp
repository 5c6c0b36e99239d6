#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tracelab/error.hpp"
#include "tracelab/model.hpp"
#include "tracelab/stepfn.hpp"

using namespace tracelab;

namespace {

StepFunction indicator() { return StepFunction({DD(0.0)}, {LogReal::one()}); }

// z truncated at depth k_max, built by hand to keep these tests independent
// of the gallery.
StepFunction hand_t0(int k_max) {
    std::vector<DD> knots;
    std::vector<LogReal> vals;
    knots.push_back(DD(1.0));
    vals.push_back(LogReal::from_log(DD(-1.0)));
    for (int k = 1; k <= k_max; ++k) {
        knots.push_back(exp(DD(k)));
        vals.push_back(LogReal::from_log(DD(k) - exp(DD(k))));
    }
    return StepFunction(knots, vals);
}

// Term-by-term value of the integral of z over [0, e^(e^n)].
double t0_integral_oracle(int n) {
    double s = 1.0;
    for (int k = 1; k <= n; ++k) {
        double tk = std::exp(std::exp(double(k)));
        double tprev = std::exp(std::exp(double(k - 1)));
        s += std::exp(k - std::exp(double(k))) * (tk - tprev);
    }
    return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("eval") {
    CHECK(indicator().eval(DD(-1.0)) == LogReal::one());
    CHECK(indicator().eval(DD(0.5)).is_zero());
    StepFunction z = hand_t0(3);
    LogReal v = z.eval(log(exp(exp(DD(2.0))) - 1e-6));
    CHECK(std::abs(v.logmag().to_double() - (2.0 - std::exp(2.0))) < 1e-14);
    CHECK(std::abs(v.logmag().to_double() + 5.389056) < 1e-6);
    CHECK(z.eval(DD(1e9)) == z.tail());
    CHECK(z.eval(DD(0.0)).logmag() == DD(-1.0));
}

TEST_CASE("integral examples") {
    StepFunction first({DD(1.0)}, {LogReal::from_log(DD(-1.0))});
    CHECK(std::abs(first.integral(DD(1.0)).to_double() - 1.0) < 1e-30);
    CHECK(std::abs(indicator().integral(log(DD(0.5))).to_double() - 0.5) < 1e-16);

    StepFunction z = hand_t0(5);
    double two_piece = 1.0 + std::exp(1.0 - std::exp(1.0)) * (std::exp(std::exp(1.0)) - std::exp(1.0));
    CHECK(rel(z.integral(DD(std::exp(1.0))).to_double(), two_piece) < 1e-13);
    CHECK(rel(z.integral(exp(DD(1.0))).to_double(), t0_integral_oracle(1)) < 1e-13);
    CHECK(rel(z.integral(exp(DD(3.0))).to_double(), t0_integral_oracle(3)) < 1e-13);
    CHECK(rel(z.integral(exp(DD(5.0))).to_double(), t0_integral_oracle(5)) < 1e-13);
}

TEST_CASE("integral divergent tail") {
    StepFunction f({DD(0.0)}, {LogReal::one()}, LogReal::from_double(0.5));
    CHECK_THROWS_AS(f.integral(DD(1.0)), DivergentTail);
    CHECK(f.integral(DD(-1.0)).to_double() == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("power") {
    StepFunction first({DD(1.0)}, {LogReal::from_log(DD(-1.0))});
    CHECK(first.power(DD(1.0)).eval(DD(0.0)) == first.eval(DD(0.0)));
    CHECK(first.power(DD(2.0)).eval(DD(0.0)).logmag() == DD(-2.0));
    CHECK_THROWS_AS(first.power(DD(0.5)), ConfigError);

    std::vector<DD> knots;
    std::vector<LogReal> vals;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        knots.push_back(log(DD(i + 1.0)));
        vals.push_back(LogReal::from_double(1.0 / (i + 1.0)));
    }
    StepFunction h(knots, vals);
    // Pairwise-compensated plain sum as the oracle.
    double s = 0.0, c = 0.0;
    for (int i = n; i >= 1; --i) {
        double term = std::pow(double(i), -1.01);
        double y = term - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    CHECK(rel(h.power_integral(DD(1.01)).to_double(), s) < 1e-12);
    CHECK(rel(h.power(DD(1.01)).integral(h.last_knot()).to_double(), s) < 1e-12);
    CHECK(h.distribution(LogReal::from_double(1.0 / 100.5)).to_double() == doctest::Approx(100.0));
}

TEST_CASE("distribution") {
    CHECK(indicator().distribution(LogReal::from_double(0.5)).to_double() == doctest::Approx(1.0));
    CHECK(indicator().distribution(LogReal::from_double(2.0)).is_zero());
    StepFunction z = hand_t0(6);
    for (int k = 1; k <= 6; ++k) {
        LogReal plateau = LogReal::from_log(DD(k) - exp(DD(k)));
        LogReal s = plateau * LogReal::from_log(DD(-1e-9));
        CHECK(z.distribution(s).logmag() == exp(DD(k)));
    }
    CHECK_THROWS_AS(z.distribution(LogReal::zero()), NumericError);
}

TEST_CASE("property: distribution and eval are consistent") {
    std::mt19937_64 rng(7);
    StepFunction z = hand_t0(8);
    std::uniform_int_distribution<int> pick(1, 7);
    std::uniform_real_distribution<double> frac(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        int k = pick(rng);
        DD hi = DD(k) - exp(DD(k)), lo = DD(k + 1) - exp(DD(k + 1));
        LogReal s = LogReal::from_log(lo + (hi - lo) * frac(rng));
        DD ell = z.distribution(s).logmag();
        CHECK(z.eval(ell) <= s);
        CHECK(z.eval(ell - 1e-9) > s);
    }
}

TEST_CASE("dilate and exponentiate") {
    StepFunction z = hand_t0(4);
    StepFunction same = z.dilate(DD(1.0));
    StepFunction same2 = z.exponentiate(DD(1.0));
    for (std::size_t i = 0; i < z.pieces(); ++i) {
        CHECK(same.knots()[i] == z.knots()[i]);
        CHECK(same2.knots()[i] == z.knots()[i]);
    }
    StepFunction half = indicator().dilate(DD(2.0));
    CHECK(half.eval(log(DD(0.49))) == LogReal::one());
    CHECK(half.eval(log(DD(0.5))).is_zero());
    StepFunction sq = z.exponentiate(DD(2.0));
    for (double ell : {0.3, 1.7, 4.0, 9.0, 20.0}) CHECK(sq.eval(DD(ell)) == z.eval(DD(2.0 * ell)));
    StepFunction ab = z.exponentiate(DD(2.0)).exponentiate(DD(4.0));
    StepFunction direct = z.exponentiate(DD(8.0));
    for (std::size_t i = 0; i < z.pieces(); ++i) CHECK(ab.knots()[i] == direct.knots()[i]);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(StepFunction({DD(1.0), DD(0.5)}, {LogReal::one(), LogReal::one()}), ModelError);
    CHECK_THROWS_AS(StepFunction({DD(0.0), DD(1.0)}, {LogReal::from_double(0.5), LogReal::one()}), ModelError);
    CHECK_THROWS_AS(StepFunction({DD(0.0)}, {LogReal::from_double(-1.0)}), ModelError);
    CHECK_THROWS_AS(StepFunction({DD(0.0)}, {LogReal::one()}, LogReal::from_double(2.0)), ModelError);
    StepFunction dedup({DD(0.0), DD(0.0), DD(1.0)}, {LogReal::one(), LogReal::one(), LogReal::from_double(0.5)});
    CHECK(dedup.pieces() == 2);
}

TEST_CASE("property: integral monotone and additive") {
    std::mt19937_64 rng(29);
    StepFunction z = hand_t0(10);
    std::uniform_real_distribution<double> ell(-5.0, std::exp(10.0));
    for (int i = 0; i < 1000; ++i) {
        DD a = DD(ell(rng)), b = DD(ell(rng));
        if (b < a) std::swap(a, b);
        CHECK(z.integral(a) <= z.integral(b));
    }
}

TEST_CASE("validate_weyl") {
    StepFunction mu({DD(0.0), log(DD(2.0))}, {LogReal::one(), LogReal::from_double(0.5)});
    OperatorModel ok{mu, SpectrumModel({{1.0, 1}, {0.5, 1}}), "ok", std::nullopt, std::nullopt};
    CHECK(validate_weyl(ok));
    OperatorModel bad{mu, SpectrumModel({{1.0, 1}, {1.0, 1}}), "bad", std::nullopt, std::nullopt};
    CHECK_FALSE(validate_weyl(bad));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigenvalue> ev;
        for (int i = 0; i < 200; ++i) ev.push_back({{g(rng), g(rng)}, 1 + i % 3});
        CHECK(validate_weyl(normal_model(SpectrumModel(ev), "random")));
    }
}
