#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "tracelab/model.hpp"
#include "tracelab/profile.hpp"

namespace tracelab {

/// S(t) = (1/log(1+t)) int_0^t mu.  Native coordinate v; the domain ends at
/// the model horizon when one is set.
Profile dixmier_profile(const OperatorModel& model);

/// (1/log(1+t)) int_0^{d(1/t)} mu.
Profile truncated_profile(const OperatorModel& model);

/// t mu(t) / log(1+t).
Profile remainder_mu(const OperatorModel& model);

/// d(1/t) / (t log(1+t)).
Profile remainder_d(const OperatorModel& model);

/// g(r) = (1/r) int mu^(1+1/r).  Native variable r, carried in the v slot
/// (so reframing to u gives log r).  With a horizon H (in v) the domain
/// stops at r = H/30, where the neglected tail is below e^-30 relative for
/// 1/s-type decay.
Profile zeta_profile(const OperatorModel& model);

/// beta(s)/s with beta(s) = sum of singular values exceeding e^-s,
/// evaluated as int_0^{d(e^-s)} mu.  Native variable s in the v slot.
Profile beta_profile(const OperatorModel& model);

/// Cesaro mean in the profile's own coordinate: x -> (1/x) int_0^x p.
/// Closed forms are integrated piece-aware between grid points; sampled
/// profiles use the trapezoid rule on their own grid.  spu is the number of
/// grid points per unit; fewer than 16 raises GridTooCoarse.
Profile cesaro(const Profile& p, DD x_end, int spu);

enum class Region { Circle, RectUnion, ReOnly, ImOnly };

const char* region_name(Region r);
Region parse_region(const std::string& name);

/// Numerators of the Lidskii sums at one scale, with the eigenvalue counts
/// the bounds refer to (all with multiplicity).
struct LidskiiSums {
    DD circle_re, circle_im;  // |lambda| > 1/t
    DD rect_re, rect_im;      // |Re| > 1/t or |Im| > 1/t
    DD re_only;               // sum of Re over |Re| > 1/t
    DD im_only;               // sum of Im over |Im| > 1/t
    std::int64_t d_t = 0;     // #{|lambda| > 1/t}
    std::int64_t d_re = 0;    // #{|Re| > 1/t}
    std::int64_t d_im = 0;    // #{|Im| > 1/t}
};

/// Sorted prefix tables so each scale costs a few binary searches.
class LidskiiTable {
public:
    explicit LidskiiTable(const SpectrumModel& spectrum);
    /// Sums at t = e^v.
    LidskiiSums at(DD v) const;
    /// Scales v = -log(key) at which the given region's sum jumps.
    std::vector<DD> jumps(Region r) const;

    struct Order {
        std::vector<double> keys;  // descending
        std::vector<DD> re, im;    // prefix sums (weighted by multiplicity)
        std::vector<std::int64_t> count;
    };

private:
    Order circle_, rect_, re_, im_;
};

/// Real and imaginary parts of (1/log(1+t)) * numerator for the region.
std::pair<Profile, Profile> lidskii_profile(const SpectrumModel& spectrum, Region region);

/// log(1 + e^v) as a LogReal.
LogReal log1p_scale(DD v);

}  // namespace tracelab
