#pragma once

// Joint pointer moments for n sequential von Neumann measurements with
// Gaussian pointers: an exact engine, the first-order weak-regime formulas,
// and recovery of sequential weak values from moment combinations.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/pointer.hpp"
#include "weaklab/qm_core.hpp"
#include "weaklab/weak_values.hpp"

namespace weaklab {

struct MeasurementStep {
    Observable observable;
    GaussianPointer pointer;
};

class Scenario {
public:
    /// Throws EmptyList for no steps and DimensionMismatch when the state,
    /// any observable or the post-selection element disagree on dimension.
    Scenario(MixedState initial, std::vector<MeasurementStep> steps,
             std::optional<PovmElement> post = std::nullopt);

    const MixedState& initial() const noexcept { return initial_; }
    const std::vector<MeasurementStep>& steps() const noexcept { return steps_; }
    const std::optional<PovmElement>& post() const noexcept { return post_; }
    std::size_t size() const noexcept { return steps_.size(); }
    Eigen::Index dimension() const noexcept { return initial_.dimension(); }

    MeasurementSequence sequence() const;

    /// Copy with step `index` (0-based) using a different pointer width.
    Scenario with_sigma(std::size_t index, double sigma) const;

private:
    MixedState initial_;
    std::vector<MeasurementStep> steps_;
    std::optional<PovmElement> post_;
};

class MomentPattern {
public:
    explicit MomentPattern(std::vector<PointerOperatorKind> kinds);

    /// Parses a string over {i, x, X, p, P}, one letter per step.
    static MomentPattern parse(std::string_view text);
    static MomentPattern uniform(std::size_t n, PointerOperatorKind kind);

    const std::vector<PointerOperatorKind>& kinds() const noexcept { return kinds_; }
    std::size_t size() const noexcept { return kinds_.size(); }
    PointerOperatorKind operator[](std::size_t i) const { return kinds_[i]; }
    std::string to_string() const;

private:
    std::vector<PointerOperatorKind> kinds_;
};

enum class MomentMethod { Exact, WeakRegime };

std::string_view to_string(MomentMethod method);

struct MomentResult {
    double value;
    double postselection_probability;
    MomentMethod method;
};

/// Tr(M eta) / Tr(eta) with the exact Gaussian matrix elements. Each step acts
/// on the system operator as a Schur multiplier in the observable's
/// eigenbasis, which sums the same eigenindex-tuple series term for term.
MomentResult exact_moment(const Scenario& scn, const MomentPattern& pat);

/// First-order weak-regime value. Identity slots drop out of the operator
/// string; squared kinds throw UnsupportedKind.
MomentResult weak_prediction(const Scenario& scn, const MomentPattern& pat);

MomentResult evaluate_moment(const Scenario& scn, const MomentPattern& pat, MomentMethod method);

/// Sequential weak value rebuilt from position/momentum moment combinations.
/// Without post-selection only momentum subsets of the first n-1 pointers
/// contribute.
Complex recover_weak_value(const Scenario& scn, MomentMethod source);

/// 2^(1-n) Tr[{A_1, {A_2, ..., {A_{n-1}, A_n}...}} rho].
double nested_anticommutator_value(const MixedState& rho, const MeasurementSequence& seq);
double nested_anticommutator_value(const CMatrix& rho, std::span<const CMatrix> observables);

struct SingleMeasurementStats {
    double mean_x;
    double mean_p;
    double var_x;
    double var_p;
};

/// Weak-regime pointer means and variances for one measurement of A.
SingleMeasurementStats single_measurement_stats(const MixedState& rho, const std::optional<PovmElement>& post,
                                                const Observable& a, const GaussianPointer& ptr);

/// Every step satisfies the weak-regime condition against its own spectrum and
/// the magnitude of the scenario's sequential weak value.
bool scenario_weak_regime(const Scenario& scn, double ratio = kDefaultWeakRatio);

}  // namespace weaklab
