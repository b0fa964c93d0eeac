#pragma once

// Weak-value definitions (single, sequential, POVM post-selected and without
// post-selection) and the magnitude bounds they obey.

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "weaklab/qm_core.hpp"

namespace weaklab {

/// Below this post-selection probability a weak value is undefined.
inline constexpr double kZeroProbabilityTol = 1e-14;

enum class WeakValueDefinition { PurePostSelected, GeneralizedPovm, NoPostSelection };

std::string_view to_string(WeakValueDefinition def);

struct WeakValue {
    Complex value;
    WeakValueDefinition definition;
    double postselection_probability;  // exactly 1 without post-selection
};

/// Ordered, non-empty list of observables sharing one dimension. Index 0 is
/// the first observable measured.
class MeasurementSequence {
public:
    explicit MeasurementSequence(std::vector<Observable> observables);

    std::span<const Observable> observables() const noexcept { return observables_; }
    std::size_t size() const noexcept { return observables_.size(); }
    Eigen::Index dimension() const noexcept { return observables_.front().dimension(); }
    const Observable& operator[](std::size_t i) const { return observables_[i]; }

    /// A_n ... A_1.
    CMatrix ordered_product() const;

private:
    std::vector<Observable> observables_;
};

/// Tr(E A_n ... A_1 rho) / Tr(E rho), with E = 1 when post is empty.
WeakValue seq_weak_value(const MixedState& rho, const std::optional<PovmElement>& post,
                         const MeasurementSequence& seq);
WeakValue seq_weak_value(const PureState& psi, const std::optional<PovmElement>& post,
                         const MeasurementSequence& seq);

/// Generalized single weak value A_rho^E of an arbitrary (possibly
/// non-Hermitian) operator.
Complex generalized_weak_value(const CMatrix& rho, const CMatrix& effect, const CMatrix& op);

/// prod_j ||A_j||.
double norm_product_bound(const MeasurementSequence& seq);

struct ProjectorPairReport {
    double re_value;
    bool bound_satisfied;  // re_value >= -1/8 - 1e-12
};

/// Re <psi| B A |psi> for two projectors. Throws NotAProjector.
ProjectorPairReport projector_pair_report(const PureState& psi, const Observable& a, const Observable& b);

}  // namespace weaklab
