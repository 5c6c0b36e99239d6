#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tracelab/double_double.hpp"
#include "tracelab/stepfn.hpp"

namespace tracelab {

struct Eigenvalue {
    std::complex<double> value;
    std::int64_t multiplicity = 1;
};

/// Finite list of eigenvalues with positive multiplicities.
class SpectrumModel {
public:
    SpectrumModel() = default;
    explicit SpectrumModel(std::vector<Eigenvalue> eigenvalues);

    const std::vector<Eigenvalue>& eigenvalues() const { return eigenvalues_; }
    bool empty() const { return eigenvalues_.empty(); }
    /// Count with multiplicities.
    std::int64_t total_multiplicity() const;
    /// True when every eigenvalue is real and >= 0.
    bool is_positive() const;

private:
    std::vector<Eigenvalue> eigenvalues_;
};

/// Singular value function paired with a spectrum by Weyl equality (the
/// normal-operator case): moduli sorted descending, one unit per eigenvalue.
StepFunction weyl_paired_mu(const SpectrumModel& spectrum);

struct GeneratorSpec {
    std::string name;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

/// An operator represented by its singular value function and, optionally,
/// its spectrum.
struct OperatorModel {
    StepFunction mu;
    std::optional<SpectrumModel> spectrum;
    std::string label;
    /// Largest log-abscissa at which the model stands for the operator it
    /// names.  Truncations of infinite-rank operators (T0 at finite depth,
    /// the harmonic lattice) set it; exact finite-rank models leave it empty.
    std::optional<DD> horizon_log;
    std::optional<GeneratorSpec> generator;

    /// Positivity for measurability analysis: mu is nonnegative by
    /// construction, so only a present spectrum can disqualify the model.
    bool is_positive() const { return !spectrum || spectrum->is_positive(); }
};

/// True iff sum_{n<N} |lambda_(n)| <= int_0^N mu for every N up to the
/// spectrum size, eigenvalues ordered by decreasing modulus.
bool validate_weyl(const OperatorModel& model);

/// Model of a normal operator with the given spectrum.
OperatorModel normal_model(SpectrumModel spectrum, std::string label);

}  // namespace tracelab
