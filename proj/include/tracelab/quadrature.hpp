#pragma once

#include <vector>

#include "tracelab/double_double.hpp"
#include "tracelab/profile.hpp"

namespace tracelab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Integral of p over [a, b] in its view coordinate.  The interval is split
/// at the profile's breaks; next to each break the rule refines
/// geometrically down to offsets near working precision, so boundary layers
/// far narrower than the piece (spikes of width e^-k) are resolved.
QuadResult integrate(const Profile& p, DD a, DD b);

/// Running integrals from points[0] to each points[i]; points ascending.
/// Grid points that are not breaks get ordinary adaptive treatment.
std::vector<QuadResult> cumulative_integral(const Profile& p, const std::vector<DD>& points);

}  // namespace tracelab
