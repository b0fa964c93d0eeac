#include "weaklab/weak_values.hpp"

#include <sstream>

namespace weaklab {

std::string_view to_string(WeakValueDefinition def) {
    switch (def) {
        case WeakValueDefinition::PurePostSelected: return "PurePostSelected";
        case WeakValueDefinition::GeneralizedPovm: return "GeneralizedPovm";
        case WeakValueDefinition::NoPostSelection: return "NoPostSelection";
    }
    return "Unknown";
}

MeasurementSequence::MeasurementSequence(std::vector<Observable> observables)
    : observables_(std::move(observables)) {
    if (observables_.empty()) {
        throw Error(ErrorCode::EmptyList, "measurement sequence is empty");
    }
    const Eigen::Index d = observables_.front().dimension();
    for (std::size_t j = 1; j < observables_.size(); ++j) {
        if (observables_[j].dimension() != d) {
            std::ostringstream os;
            os << "observable " << j + 1 << " has dimension " << observables_[j].dimension()
               << ", expected " << d;
            throw Error(ErrorCode::DimensionMismatch, os.str());
        }
    }
}

CMatrix MeasurementSequence::ordered_product() const {
    CMatrix out = observables_.front().matrix();
    for (std::size_t j = 1; j < observables_.size(); ++j) out = observables_[j].matrix() * out;
    return out;
}

Complex generalized_weak_value(const CMatrix& rho, const CMatrix& effect, const CMatrix& op) {
    const double p = (effect * rho).trace().real();
    if (!(p > kZeroProbabilityTol)) {
        throw Error(ErrorCode::ZeroPostSelectionProbability, "Tr(E rho) vanishes; weak value undefined");
    }
    return (effect * op * rho).trace() / p;
}

WeakValue seq_weak_value(const MixedState& rho, const std::optional<PovmElement>& post,
                         const MeasurementSequence& seq) {
    if (rho.dimension() != seq.dimension() || (post && post->dimension() != seq.dimension())) {
        throw Error(ErrorCode::DimensionMismatch, "state, post-selection and observables must share a dimension");
    }
    const CMatrix chain_rho = seq.ordered_product() * rho.matrix();
    if (!post) {
        return {chain_rho.trace(), WeakValueDefinition::NoPostSelection, 1.0};
    }
    const CMatrix& e = post->matrix();
    const double p = (e * rho.matrix()).trace().real();
    if (!(p > kZeroProbabilityTol)) {
        std::ostringstream os;
        os << "post-selection probability Tr(E rho) = " << p << " is below " << kZeroProbabilityTol;
        throw Error(ErrorCode::ZeroPostSelectionProbability, os.str());
    }
    const bool pure_effect = (e * e - e).cwiseAbs().maxCoeff() <= kProjectorTol &&
                             std::abs(e.trace().real() - 1.0) <= kProjectorTol;
    const auto def = (rho.is_pure() && pure_effect) ? WeakValueDefinition::PurePostSelected
                                                    : WeakValueDefinition::GeneralizedPovm;
    return {(e * chain_rho).trace() / p, def, p};
}

WeakValue seq_weak_value(const PureState& psi, const std::optional<PovmElement>& post,
                         const MeasurementSequence& seq) {
    return seq_weak_value(MixedState(psi), post, seq);
}

double norm_product_bound(const MeasurementSequence& seq) {
    double bound = 1.0;
    for (const Observable& obs : seq.observables()) bound *= spectral_norm(obs);
    return bound;
}

ProjectorPairReport projector_pair_report(const PureState& psi, const Observable& a, const Observable& b) {
    if (!is_projector(a) || !is_projector(b)) {
        throw Error(ErrorCode::NotAProjector, "projector_pair_report requires idempotent observables");
    }
    if (a.dimension() != psi.dimension() || b.dimension() != psi.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "projector_pair_report: dimensions differ");
    }
    const CVector& v = psi.amplitudes();
    const double re = v.dot(b.matrix() * (a.matrix() * v)).real();
    return {re, re >= -0.125 - 1e-12};
}

}  // namespace weaklab
