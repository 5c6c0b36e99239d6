#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "tracelab/double_double.hpp"
#include "tracelab/logreal.hpp"

namespace tracelab {

/**
 * Nonincreasing, nonnegative piecewise-constant function on [0, inf).
 *
 * Piece i carries value v_i on [t_{i-1}, t_i) with t_{-1} = 0 and
 * t_i = exp(knot_i); beyond the last knot the function equals the tail.
 * Knots live in the v = log t coordinate so that piece lengths, and hence
 * integrals, can be carried in the log domain at scales like t = e^(e^30).
 *
 * Instances are immutable and share their storage, so copies are cheap.
 */
class StepFunction {
public:
    /// Validates and normalises: zero-length pieces are dropped; knots must
    /// then be strictly increasing, values nonnegative and nonincreasing,
    /// and 0 <= tail <= last value.  Throws ModelError otherwise.
    StepFunction(std::vector<DD> knots, std::vector<LogReal> values, LogReal tail = LogReal::zero());

    /// Trusted constructor for generators that know each piece's
    /// log-length log(t_i - t_{i-1}) in closed form.  Still validated.
    static StepFunction with_log_lengths(std::vector<DD> knots, std::vector<LogReal> values,
                                         std::vector<DD> log_lengths, LogReal tail = LogReal::zero());

    std::size_t pieces() const { return data_->knots.size(); }
    std::span<const DD> knots() const { return data_->knots; }
    std::span<const LogReal> values() const { return data_->values; }
    std::span<const DD> log_lengths() const { return data_->log_lengths; }
    const LogReal& tail() const { return data_->tail; }
    DD last_knot() const { return data_->knots.back(); }

    /// mu at t = e^ell (right-continuous).
    LogReal eval(DD ell) const;

    /// Integral of mu over [0, e^ell].  Throws DivergentTail when ell is past
    /// the last knot and the tail is nonzero.
    LogReal integral(DD ell) const;
    /// Integral over [0, t_i], i.e. through the end of piece i.
    LogReal integral_through(std::size_t i) const { return data_->prefix[i]; }

    /// Measure of {mu > s} for s > 0 (zero measure is returned as zero).
    LogReal distribution(const LogReal& s) const;
    /// Number of pieces whose value exceeds s.
    std::size_t pieces_above(const LogReal& s) const;

    /// Pointwise mu^p, p >= 1.
    StepFunction power(DD p) const;
    /// Integral of mu^p over [0, e^ell] without materialising the power.
    LogReal power_integral(DD p, DD ell) const;
    /// Integral of mu^p over [0, inf); requires a zero tail.
    LogReal power_integral(DD p) const;

    /// x(t) -> x(beta t): knots shift by -log beta.
    StepFunction dilate(DD beta) const;
    /// x(t) -> x(t^a): knots scale by 1/a.
    StepFunction exponentiate(DD a) const;

private:
    struct Data {
        std::vector<DD> knots;
        std::vector<LogReal> values;
        std::vector<DD> log_lengths;
        std::vector<LogReal> prefix;
        LogReal tail;
    };

    StepFunction() = default;
    void finish();
    std::size_t piece_index(DD ell) const;
    // log(e^ell - t_{i-1}) for the piece containing ell; nullopt-like zero
    // measure is signalled by returning false.
    bool partial_log_length(std::size_t i, DD ell, DD& out) const;

    std::shared_ptr<Data> data_;
};

/// Piece log-length from two consecutive log-knots (the first piece starts at 0).
DD piece_log_length(const DD* previous_knot, DD knot);

}  // namespace tracelab
