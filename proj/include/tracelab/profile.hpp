#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "tracelab/double_double.hpp"
#include "tracelab/logreal.hpp"

namespace tracelab {

/// Scale coordinates: t, v = log t, u = log log t.
enum class Coord { T, V, U };

const char* coord_name(Coord c);
Coord parse_coord(const std::string& name);

/// Converts a scale value between coordinates.  U requires v > 0.
DD convert(DD x, Coord from, Coord to);

/**
 * Real-valued function of scale.
 *
 * A closed-form profile holds an evaluator in its native coordinate plus
 * the points where it is discontinuous; a sampled one holds a uniform grid.
 * Either can be viewed in any coordinate: reframing a closed form only
 * changes the view, so evaluating before or after conversion agree exactly.
 */
class Profile {
public:
    using Evaluator = std::function<LogReal(DD)>;
    /// Breaks of the native evaluator inside [lo, hi], ascending.
    using BreakFinder = std::function<std::vector<DD>(DD, DD)>;

    static Profile closed_form(Coord native, Evaluator f, DD lo, DD hi, BreakFinder breaks, std::string provenance,
                               double error = 0.0);
    /// Breaks given as a sorted list.
    static Profile closed_form(Coord native, Evaluator f, DD lo, DD hi, std::vector<DD> breaks,
                               std::string provenance, double error = 0.0);
    static Profile sampled(Coord coord, DD start, DD step, std::vector<DD> samples, std::string provenance,
                           double error = 0.0);

    Coord coord() const { return view_; }
    bool is_closed_form() const { return static_cast<bool>(closed_); }
    const std::string& provenance() const { return provenance_; }
    /// Quadrature or interpolation error bound carried along (absolute).
    double error_estimate() const { return error_; }

    /// Name of the view coordinate in output.  Profiles whose native
    /// variable is not a t-scale (r for zeta, s for beta) name it here.
    std::string coord_label() const;
    Profile& set_native_label(std::string label);

    /// Domain in the view coordinate (may be infinite at the low end for U).
    DD lo() const { return lo_; }
    DD hi() const { return hi_; }
    bool contains(DD x) const;

    LogReal at(DD x) const;
    double value(double x) const { return at(DD(x)).to_double(); }
    /// Breaks in the view coordinate within [a, b].
    std::vector<DD> breaks(DD a, DD b) const;

    /// Change the view coordinate.  Throws DomainTooSmall when no part of
    /// the domain maps (U needs t > 1); the domain is clipped otherwise.
    Profile reframe(Coord c) const;
    /// x -> p(x + a) in the view coordinate.
    Profile translate(DD a) const;
    /// t-actions: x(t) -> x(t^a) and x(t) -> x(beta t).
    Profile exponentiate(DD a) const;
    Profile dilate(DD beta) const;
    /// Pointwise difference of two closed forms on their common domain.
    Profile subtract(const Profile& other) const;

    /// n-point uniform sample in the view coordinate.
    Profile sample(DD start, DD step, std::size_t n) const;

    // Sampled access.
    DD start() const { return sampled_->start; }
    DD step() const { return sampled_->step; }
    const std::vector<DD>& samples() const { return sampled_->samples; }

private:
    struct Closed {
        Coord native;
        Evaluator f;
        DD lo, hi;  // native coordinate
        BreakFinder breaks;
        std::string label;
    };
    struct Sampled {
        DD start, step;
        std::vector<DD> samples;
    };

    Profile() = default;
    DD to_native(DD x) const;
    DD from_native(DD x) const;
    void refresh_domain();

    Coord view_ = Coord::V;
    std::shared_ptr<const Closed> closed_;
    std::shared_ptr<const Sampled> sampled_;
    std::string provenance_;
    double error_ = 0.0;
    DD lo_, hi_;  // view-coordinate domain, cached
};

/// Break finder over a sorted vector, shared without copying.
Profile::BreakFinder sorted_breaks(std::shared_ptr<const std::vector<DD>> points);

/// Rows "coord_name,coord_value,value,value_logmag,provenance" for the
/// given view-coordinate points.
void write_csv(std::ostream& out, const Profile& p, const std::vector<DD>& points);
void write_csv_header(std::ostream& out);
std::string csv_row(const Profile& p, DD x, const LogReal& value);

}  // namespace tracelab
