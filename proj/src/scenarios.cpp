#include "weaklab/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace weaklab {

namespace {

MixedState ground_state() { return MixedState(PureState::basis(2, 0)); }

void require_positive(double sigma) {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "pointer widths must be > 0");
}

}  // namespace

PureState illustrative_ket(int j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
    CVector v(2);
    v << 0.5, -sign * std::sqrt(3.0) / 2.0;
    return PureState::normalized(std::move(v));
}

Scenario build_illustrative(double sigma1, double sigma2) {
    require_positive(sigma1);
    require_positive(sigma2);
    return Scenario(ground_state(), {{projector_from_ket(illustrative_ket(1)), GaussianPointer(sigma1)},
                                     {projector_from_ket(illustrative_ket(2)), GaussianPointer(sigma2)}});
}

Scenario build_pauli_xy(double sigma1, double sigma2) {
    return Scenario(ground_state(), {{pauli::y(), GaussianPointer(sigma1)}, {pauli::x(), GaussianPointer(sigma2)}});
}

PureState chain_ket(int j, int n) {
    const double angle = j * std::numbers::pi / (n + 1);
    CVector v(2);
    v << std::cos(angle), std::sin(angle);
    return PureState::normalized(std::move(v));
}

Scenario build_projector_chain(int n, double sigma) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "projector chain needs n >= 1");
    std::vector<MeasurementStep> steps;
    for (int j = 1; j <= n; ++j) steps.push_back({projector_from_ket(chain_ket(j, n)), GaussianPointer(sigma)});
    return Scenario(ground_state(), std::move(steps));
}

Scenario build_common_cause(const PureState& psi_ab, const Observable& a, const Observable& b,
                            double sigma1, double sigma2) {
    if (psi_ab.dimension() != a.dimension() * b.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "bipartite state dimension must equal dim(A) * dim(B)");
    }
    Observable lifted_a = tensor(a, Observable::identity(b.dimension()));
    Observable lifted_b = tensor(Observable::identity(a.dimension()), b);
    return Scenario(MixedState(psi_ab),
                    {{std::move(lifted_a), GaussianPointer(sigma1)}, {std::move(lifted_b), GaussianPointer(sigma2)}});
}

std::string_view to_string(CausalVerdictKind kind) {
    return kind == CausalVerdictKind::DirectCauseWitnessed ? "DirectCauseWitnessed" : "Inconclusive";
}

CausalVerdict causal_witness(double moment, std::pair<double, double> hull, double margin) {
    if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "witness margin must be >= 0");
    const bool outside = moment < hull.first - margin || moment > hull.second + margin;
    return {outside ? CausalVerdictKind::DirectCauseWitnessed : CausalVerdictKind::Inconclusive, moment, hull};
}

}  // namespace weaklab
