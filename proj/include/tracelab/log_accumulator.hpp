#pragma once

#include "tracelab/double_double.hpp"
#include "tracelab/logreal.hpp"

namespace tracelab {

/// Sum of positive terms given by their logs.  Keeps a running scale and a
/// compensated linear sum, so each term costs one exp instead of the
/// exp + log1p of a LogReal addition.
class LogAccumulator {
public:
    void add_log(DD log_term) {
        if (empty_) {
            scale_ = log_term;
            sum_ = DD(1.0);
            empty_ = false;
            return;
        }
        DD gap = log_term - scale_;
        if (gap.hi() > 0.0) {
            sum_ = sum_ * exp(-gap) + 1.0;
            scale_ = log_term;
        } else if (gap.hi() > -80.0) {
            sum_ += exp(gap);
        }
    }
    void add(const LogReal& x) {
        if (!x.is_zero()) add_log(x.logmag());
    }
    bool empty() const { return empty_; }
    LogReal value() const { return empty_ ? LogReal::zero() : LogReal::from_log(scale_ + log(sum_)); }

private:
    DD scale_{};
    DD sum_{};
    bool empty_ = true;
};

}  // namespace tracelab
