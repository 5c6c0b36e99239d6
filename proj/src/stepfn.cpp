#include "tracelab/stepfn.hpp"

#include <algorithm>
#include <string>

#include "tracelab/error.hpp"
#include "tracelab/log_accumulator.hpp"

namespace tracelab {

DD piece_log_length(const DD* previous_knot, DD knot) {
    if (previous_knot == nullptr) return knot;
    return log_difference(knot, *previous_knot);
}

StepFunction::StepFunction(std::vector<DD> knots, std::vector<LogReal> values, LogReal tail) {
    if (knots.size() != values.size()) throw ModelError("step function: knots and values differ in length");
    if (knots.empty()) throw ModelError("step function: at least one piece is required");
    auto d = std::make_shared<Data>();
    d->knots.reserve(knots.size());
    d->values.reserve(values.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!knots[i].is_finite()) throw ModelError("step function: non-finite knot");
        if (!d->knots.empty()) {
            if (knots[i] == d->knots.back()) continue;  // zero-length piece
            if (knots[i] < d->knots.back()) {
                throw ModelError("step function: knots must be increasing (piece " + std::to_string(i) + ")");
            }
        }
        d->knots.push_back(knots[i]);
        d->values.push_back(values[i]);
    }
    d->log_lengths.reserve(d->knots.size());
    for (std::size_t i = 0; i < d->knots.size(); ++i) {
        const DD* prev = i == 0 ? nullptr : &d->knots[i - 1];
        try {
            d->log_lengths.push_back(piece_log_length(prev, d->knots[i]));
        } catch (const CancellationUnderflow&) {
            throw ModelError("step function: piece " + std::to_string(i) + " is shorter than working precision");
        }
    }
    d->tail = tail;
    data_ = std::move(d);
    finish();
}

StepFunction StepFunction::with_log_lengths(std::vector<DD> knots, std::vector<LogReal> values,
                                            std::vector<DD> log_lengths, LogReal tail) {
    if (knots.size() != values.size() || knots.size() != log_lengths.size()) {
        throw ModelError("step function: knots, values and lengths differ in length");
    }
    if (knots.empty()) throw ModelError("step function: at least one piece is required");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i - 1] < knots[i])) {
            throw ModelError("step function: knots must be strictly increasing (piece " + std::to_string(i) + ")");
        }
    }
    StepFunction f;
    auto d = std::make_shared<Data>();
    d->knots = std::move(knots);
    d->values = std::move(values);
    d->log_lengths = std::move(log_lengths);
    d->tail = tail;
    f.data_ = std::move(d);
    f.finish();
    return f;
}

void StepFunction::finish() {
    Data& d = *data_;
    const std::size_t m = d.knots.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (d.values[i].sign() < 0) throw ModelError("step function: negative value in piece " + std::to_string(i));
        if (i > 0 && d.values[i] > d.values[i - 1]) {
            throw ModelError("step function: values must be nonincreasing (piece " + std::to_string(i) + ")");
        }
    }
    if (d.tail.sign() < 0 || d.tail > d.values.back()) {
        throw ModelError("step function: tail must lie in [0, last value]");
    }
    d.prefix.resize(m);
    LogReal running;
    for (std::size_t i = 0; i < m; ++i) {
        if (!d.values[i].is_zero()) running += d.values[i] * LogReal::from_log(d.log_lengths[i]);
        d.prefix[i] = running;
    }
}

std::size_t StepFunction::piece_index(DD ell) const {
    const auto& k = data_->knots;
    return static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), ell) - k.begin());
}

bool StepFunction::partial_log_length(std::size_t i, DD ell, DD& out) const {
    if (i == 0) {
        out = ell;
        return true;
    }
    const DD& start = data_->knots[i - 1];
    if (ell == start) return false;
    try {
        out = log_difference(ell, start);
    } catch (const CancellationUnderflow&) {
        // Below working precision of the abscissa; the partial piece is
        // bounded by prefix * gap and negligible.
        return false;
    }
    return true;
}

LogReal StepFunction::eval(DD ell) const {
    std::size_t i = piece_index(ell);
    if (i >= pieces()) return data_->tail;
    return data_->values[i];
}

LogReal StepFunction::integral(DD ell) const {
    std::size_t i = piece_index(ell);
    const std::size_t m = pieces();
    if (i >= m) {
        if (!data_->tail.is_zero() && !(ell == data_->knots.back())) {
            throw DivergentTail("integral past the last knot with a nonzero tail");
        }
        return data_->prefix.back();
    }
    LogReal base = i == 0 ? LogReal::zero() : data_->prefix[i - 1];
    DD part;
    if (data_->values[i].is_zero() || !partial_log_length(i, ell, part)) return base;
    return base + data_->values[i] * LogReal::from_log(part);
}

std::size_t StepFunction::pieces_above(const LogReal& s) const {
    const auto& v = data_->values;
    return static_cast<std::size_t>(
        std::partition_point(v.begin(), v.end(), [&](const LogReal& x) { return x > s; }) - v.begin());
}

LogReal StepFunction::distribution(const LogReal& s) const {
    if (!s.is_positive()) throw NumericError("distribution: threshold must be positive");
    std::size_t count = pieces_above(s);
    if (count == 0) return LogReal::zero();
    if (count == pieces() && data_->tail > s) throw DivergentTail("distribution: tail exceeds threshold");
    return LogReal::from_log(data_->knots[count - 1]);
}

StepFunction StepFunction::power(DD p) const {
    if (p < DD(1.0)) throw ConfigError("power: exponent must be >= 1");
    std::vector<LogReal> vals;
    vals.reserve(pieces());
    for (const auto& v : data_->values) vals.push_back(pow(v, p));
    return with_log_lengths(data_->knots, std::move(vals), data_->log_lengths, pow(data_->tail, p));
}

LogReal StepFunction::power_integral(DD p, DD ell) const {
    std::size_t i = piece_index(ell);
    const std::size_t m = pieces();
    if (i >= m && !data_->tail.is_zero()) throw DivergentTail("power integral past the last knot with a nonzero tail");
    LogAccumulator acc;
    const std::size_t full = std::min(i, m);
    for (std::size_t j = 0; j < full; ++j) {
        if (data_->values[j].is_zero()) break;
        acc.add_log(data_->values[j].logmag() * p + data_->log_lengths[j]);
    }
    if (i < m && !data_->values[i].is_zero()) {
        DD part;
        if (partial_log_length(i, ell, part)) acc.add_log(data_->values[i].logmag() * p + part);
    }
    return acc.value();
}

LogReal StepFunction::power_integral(DD p) const {
    if (!data_->tail.is_zero()) throw DivergentTail("power integral over [0, inf) with a nonzero tail");
    return power_integral(p, data_->knots.back());
}

StepFunction StepFunction::dilate(DD beta) const {
    if (!(beta > DD(0.0))) throw ConfigError("dilate: beta must be positive");
    DD shift = log(beta);
    std::vector<DD> k(data_->knots);
    std::vector<DD> len(data_->log_lengths);
    for (auto& x : k) x -= shift;
    for (auto& x : len) x -= shift;
    return with_log_lengths(std::move(k), data_->values, std::move(len), data_->tail);
}

StepFunction StepFunction::exponentiate(DD a) const {
    if (!(a > DD(0.0))) throw ConfigError("exponentiate: exponent must be positive");
    std::vector<DD> k(data_->knots);
    for (auto& x : k) x /= a;
    return StepFunction(std::move(k), data_->values, data_->tail);
}

}  // namespace tracelab
