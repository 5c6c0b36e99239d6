#include "tracelab/model.hpp"

#include <algorithm>
#include <cmath>

#include "tracelab/error.hpp"

namespace tracelab {

SpectrumModel::SpectrumModel(std::vector<Eigenvalue> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
    for (const auto& e : eigenvalues_) {
        if (e.multiplicity < 1) throw ModelError("spectrum: multiplicities must be positive integers");
        if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
            throw ModelError("spectrum: non-finite eigenvalue");
        }
    }
}

std::int64_t SpectrumModel::total_multiplicity() const {
    std::int64_t n = 0;
    for (const auto& e : eigenvalues_) n += e.multiplicity;
    return n;
}

bool SpectrumModel::is_positive() const {
    return std::all_of(eigenvalues_.begin(), eigenvalues_.end(),
                       [](const Eigenvalue& e) { return e.value.imag() == 0.0 && e.value.real() >= 0.0; });
}

namespace {

std::vector<Eigenvalue> by_decreasing_modulus(const SpectrumModel& s) {
    std::vector<Eigenvalue> sorted = s.eigenvalues();
    std::stable_sort(sorted.begin(), sorted.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        return std::abs(a.value) > std::abs(b.value);
    });
    return sorted;
}

}  // namespace

StepFunction weyl_paired_mu(const SpectrumModel& spectrum) {
    if (spectrum.empty()) return StepFunction({DD(0.0)}, {LogReal::zero()});
    std::vector<DD> knots;
    std::vector<LogReal> values;
    std::int64_t count = 0;
    for (const auto& e : by_decreasing_modulus(spectrum)) {
        count += e.multiplicity;
        knots.push_back(log(DD(static_cast<double>(count))));
        values.push_back(LogReal::from_double(std::abs(e.value)));
    }
    return StepFunction(std::move(knots), std::move(values));
}

bool validate_weyl(const OperatorModel& model) {
    if (!model.spectrum) throw ModelError("validate_weyl: model has no spectrum");
    const auto sorted = by_decreasing_modulus(*model.spectrum);
    // Both sides are piecewise linear in N between eigenvalue blocks and
    // knots of mu, so the extremal gaps sit at those integers.
    std::vector<std::int64_t> checkpoints;
    std::int64_t total = 0;
    for (const auto& e : sorted) {
        total += e.multiplicity;
        checkpoints.push_back(total);
    }
    for (const DD& k : model.mu.knots()) {
        double t = std::exp(k.to_double());
        if (!(t < static_cast<double>(total))) break;
        for (double c : {std::floor(t), std::ceil(t)}) {
            if (c >= 1.0) checkpoints.push_back(static_cast<std::int64_t>(c));
        }
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    DD lhs(0.0);
    std::int64_t consumed = 0;
    std::size_t block = 0;
    std::int64_t used_in_block = 0;
    for (std::int64_t n : checkpoints) {
        while (consumed < n) {
            const auto& e = sorted[block];
            std::int64_t take = std::min(n - consumed, e.multiplicity - used_in_block);
            lhs += DD(std::abs(e.value)) * static_cast<double>(take);
            consumed += take;
            used_in_block += take;
            if (used_in_block == e.multiplicity) {
                ++block;
                used_in_block = 0;
            }
        }
        DD rhs = model.mu.integral(log(DD(static_cast<double>(n)))).to_dd();
        if (lhs > rhs + abs(rhs) * 1e-24 + 1e-300) return false;
    }
    return true;
}

OperatorModel normal_model(SpectrumModel spectrum, std::string label) {
    OperatorModel m{weyl_paired_mu(spectrum), std::move(spectrum), std::move(label), std::nullopt, std::nullopt};
    return m;
}

}  // namespace tracelab
