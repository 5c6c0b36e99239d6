#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tracelab/model.hpp"
#include "tracelab/profile.hpp"

namespace tracelab {

struct Thresholds {
    double periodicity = 1e-6;  ///< last-window Cauchy deviation
    double vanishing = 1e-3;    ///< Cesaro average (or tail increment) bound
    double convergence = 1e-6;  ///< relative window amplitude for Convergent

    /// Every threshold divided by factor (factor 10 = ten times stricter).
    Thresholds stricter(double factor) const {
        return {periodicity / factor, vanishing / factor, convergence / factor};
    }
};

struct SweepOptions {
    int n_min = 1;                ///< first u-window [n, n+1)
    std::optional<int> n_max;     ///< last window start; default from the horizon
    double u_top_default = 30.0;  ///< sweep end for models without a horizon
    int phi_samples = 128;        ///< uniform probes per window
    int knot_probes = 64;         ///< breaks per window that get offset probes
    int tail_windows = 6;         ///< windows used for the decay fit
    Thresholds thresholds;
};

enum class VerdictKind { Convergent, Oscillating, PeriodicMean, Inconclusive };
const char* verdict_kind_name(VerdictKind k);

struct Witness {
    double scale_u = 0.0;
    double value = 0.0;
};

struct Estimate {
    double value = 0.0;
    double radius = 0.0;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<Estimate> value;
    Estimate liminf, limsup;
    std::optional<double> period;
    std::vector<Witness> witnesses;
    std::optional<std::pair<double, double>> envelope;
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const Verdict& v);

/// Extremes of a profile over one u-window.
struct WindowStats {
    double start = 0.0;
    double min = 0.0, max = 0.0;
    double argmin = 0.0, argmax = 0.0;
    double mid() const { return 0.5 * (min + max); }
    double amplitude() const { return max - min; }
};

/// Probes [a, b) on a uniform grid plus geometric offsets on both sides of
/// each break, and returns the extremes.
WindowStats window_stats(const Profile& p, DD a, DD b, int phi_samples, int knot_probes);

struct SuchestonResult {
    std::vector<double> windows;  ///< window lengths w
    std::vector<double> means;    ///< sup_h mean over [h, h+w]
    double bound = 0.0;           ///< a in the fit means ~ a + b/w
    double uncertainty = 0.0;
};

/// Finite-horizon approximation of p_T(x) = lim_w sup_h (1/w) int_h^{h+w} x
/// on [lo, hi] of the view coordinate.  Each w must be <= (hi - lo)/2
/// (HorizonTooShort otherwise).  negate computes -p_T(-x), the lower envelope.
SuchestonResult sucheston_upper(const Profile& p, DD lo, DD hi, const std::vector<double>& windows, int spu = 64,
                                bool negate = false);

struct PeriodicityResult {
    std::vector<double> deviations;
    bool passes = false;
};

/// delta_n = sup_s |p(offset + n l + s) - p(offset + (n+1) l + s)| for
/// n = n0..n1, sampled on a 256-point grid plus (with probe_breaks)
/// geometric offsets on both sides of every break.  Without the break
/// probes a jump that drifts towards a period multiple is missed once the
/// drift is below the grid spacing.  Passes iff the deviations do not grow
/// (beyond rounding) and the last is below threshold.
PeriodicityResult asymptotic_periodicity(const Profile& p, double period, int n0, int n1, double threshold = 1e-6,
                                         double offset = 0.0, bool probe_breaks = true);

struct PeriodicMean {
    double value = 0.0;
    double error = 0.0;
    double window_start = 0.0;
};

/// Mean over the last full period of the domain (windows aligned at
/// offset).  Requires three full periods and a passing periodicity check
/// on them, otherwise throws NotPeriodic.
PeriodicMean periodic_mean(const Profile& p, double period, double threshold = 1e-6, double offset = 0.0);

struct VanishingResult {
    std::vector<double> horizons;
    std::vector<double> averages;
    double fitted_c = 0.0;       ///< max_U U * average(U)
    double tail_increment = 0.0; ///< I(U_max) - I(U_max / 2)
    bool passes = false;
};

/// Cesaro averages (1/U) int_0^U p for each horizon U (p >= 0, view
/// coordinate, usually u).  Passes iff the averages are nonincreasing and
/// either the last is below threshold or the running integral has settled:
/// I(U_max) - I(U_max/2) <= threshold * max(1, I(U_max)).
VanishingResult vanishing_check(const Profile& p, const std::vector<double>& horizons, double threshold = 1e-3);

struct UcModulus {
    std::vector<double> deltas;
    std::vector<double> moduli;
    bool passes = false;
};

/// Empirical sup |p(x) - p(x')| over |x - x'| <= delta on [a, b].  Passes
/// iff each tenfold reduction of delta at least halves the modulus.
UcModulus uc_modulus(const Profile& p, DD a, DD b, const std::vector<double>& deltas = {1e-2, 1e-3, 1e-4});

/// Sweep end in u for a model: log of its horizon, or the default.
double sweep_top(const OperatorModel& model, const SweepOptions& o);

/// Classifies a u-profile from its window extremes (shared by both
/// analyzers).
Verdict classify_windows(const std::vector<WindowStats>& windows, const Thresholds& thr, int tail_windows);

Verdict dixmier_verdict(const OperatorModel& model, const SweepOptions& options = {});
Verdict dp_verdict(const OperatorModel& model, const SweepOptions& options = {});

}  // namespace tracelab
