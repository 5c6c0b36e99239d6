#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracelab/model.hpp"
#include "tracelab/profile.hpp"

namespace tracelab {

inline constexpr int kT0MaxDepth = 40;
inline constexpr int kT0DefaultDepth = 30;

/// mu = sup_{0<=k<=k_max} e^(k - e^k) on [0, e^(e^k)): e^-1 on [0, e), then
/// e^(k - e^k) on [e^(e^(k-1)), e^(e^k)).  Horizon at v = e^k_max.
/// Throws RangeTooDeep for k_max > 40 and ConfigError for k_max < 1.
OperatorModel make_t0(int k_max = kT0DefaultDepth);

struct LatticeOptions {
    std::int64_t n_max = 1000000;  ///< lattice pieces [n, n+1), n < n_max
    double v_max = 442413.392009;  ///< continuation ends near v = e^13
    double growth = 1.05;          ///< ratio between consecutive continuation widths (in v)
    double max_step = 1.0;         ///< cap on continuation width in v
    std::int64_t spectrum = 0;     ///< attach eigenvalues (n+1)^-alpha for n < spectrum
};

/// (n+1)^-alpha on [n, n+1) for n < n_max, then pieces [a, b] whose value
/// is the mean of s^-alpha over the piece.  Integrals over [0, e^v] are
/// exact at every continuation knot; between knots the error is below
/// (b - a)(a^-alpha - b^-alpha), and the lattice/envelope mismatch is
/// O(1/n_max) relative.  Horizon at the last knot.
OperatorModel make_power(double alpha, const LatticeOptions& options = {});
OperatorModel make_harmonic(const LatticeOptions& options = {});

/// Plateaus: values[i] on consecutive intervals of the given lengths.
OperatorModel make_plateau(const std::vector<double>& values, const std::vector<double>& lengths);

/// mu = indicator of [0, 1).
OperatorModel make_indicator();

/// x(t) = (e/(e-1)) e^k / log t on [e^(e^k), e^(e^(k+1))), as a closed form
/// native in u on [0, k_max]: (e/(e-1)) e^(k-u) on [k, k+1).
Profile make_x_function(int k_max = kT0DefaultDepth);

enum class SpectrumLaw { Disc, Annulus, RealLine };
SpectrumLaw parse_law(const std::string& name);
const char* law_name(SpectrumLaw law);

/// lambda_j = w_j / (j+1), w_j drawn from the law (unit disc, annulus
/// 1/2 <= |w| <= 1, or [-1, 1]) with a seeded mt19937_64.  n <= 1e5.
SpectrumModel random_spectrum(std::uint64_t seed, std::int64_t n, SpectrumLaw law);

struct OracleSum {
    double value = 0.0;
    double error_bound = 0.0;  ///< N ulp of the result
};

/// sum_{n=1}^{N} n^-p by compensated summation in plain doubles, smallest
/// terms first.  harmonic is p = 1.  N <= 1e7.
OracleSum oracle_partial_sum(const std::string& expr, double p, std::int64_t N);

/// Builds the model a generator names: t0, harmonic, power, plateau,
/// indicator, random_spectrum.
OperatorModel expand(const GeneratorSpec& spec);

struct GalleryEntry {
    std::string name;
    std::string description;
    GeneratorSpec spec;
};

/// Models available by name (generators with their default parameters).
std::vector<GalleryEntry> gallery_entries();
/// Looks a name up in gallery_entries(); throws ConfigError if absent.
GeneratorSpec gallery_spec(const std::string& name);

}  // namespace tracelab
