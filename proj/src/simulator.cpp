#include "weaklab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weaklab {

// ----------------------------------------------------------------- Scenario

Scenario::Scenario(MixedState initial, std::vector<MeasurementStep> steps, std::optional<PovmElement> post)
    : initial_(std::move(initial)), steps_(std::move(steps)), post_(std::move(post)) {
    if (steps_.empty()) {
        throw Error(ErrorCode::EmptyList, "scenario has no measurement steps");
    }
    const Eigen::Index d = initial_.dimension();
    for (std::size_t j = 0; j < steps_.size(); ++j) {
        if (steps_[j].observable.dimension() != d) {
            std::ostringstream os;
            os << "step " << j + 1 << " observable has dimension " << steps_[j].observable.dimension()
               << ", scenario dimension is " << d;
            throw Error(ErrorCode::DimensionMismatch, os.str());
        }
    }
    if (post_ && post_->dimension() != d) {
        throw Error(ErrorCode::DimensionMismatch, "post-selection element dimension differs from the state");
    }
}

MeasurementSequence Scenario::sequence() const {
    std::vector<Observable> obs;
    obs.reserve(steps_.size());
    for (const MeasurementStep& s : steps_) obs.push_back(s.observable);
    return MeasurementSequence(std::move(obs));
}

Scenario Scenario::with_sigma(std::size_t index, double sigma) const {
    if (index >= steps_.size()) {
        throw Error(ErrorCode::UnknownParameter, "no step " + std::to_string(index + 1) + " in scenario");
    }
    std::vector<MeasurementStep> steps = steps_;
    steps[index].pointer = GaussianPointer(sigma);
    return Scenario(initial_, std::move(steps), post_);
}

// ------------------------------------------------------------ MomentPattern

MomentPattern::MomentPattern(std::vector<PointerOperatorKind> kinds) : kinds_(std::move(kinds)) {
    if (kinds_.empty()) {
        throw Error(ErrorCode::EmptyList, "moment pattern is empty");
    }
}

MomentPattern MomentPattern::parse(std::string_view text) {
    std::vector<PointerOperatorKind> kinds;
    for (char c : text) kinds.push_back(kind_from_code(c));
    return MomentPattern(std::move(kinds));
}

MomentPattern MomentPattern::uniform(std::size_t n, PointerOperatorKind kind) {
    return MomentPattern(std::vector<PointerOperatorKind>(n, kind));
}

std::string MomentPattern::to_string() const {
    std::string out;
    for (auto k : kinds_) out.push_back(pattern_code(k));
    return out;
}

std::string_view to_string(MomentMethod method) {
    return method == MomentMethod::Exact ? "exact" : "weak";
}

// ------------------------------------------------------------------ engines

namespace {

void require_pattern(const Scenario& scn, const MomentPattern& pat) {
    if (pat.size() != scn.size()) {
        std::ostringstream os;
        os << "pattern '" << pat.to_string() << "' has length " << pat.size() << " but the scenario has "
           << scn.size() << " steps";
        throw Error(ErrorCode::PatternLengthMismatch, os.str());
    }
}

CMatrix effect_or_identity(const Scenario& scn) {
    return scn.post() ? scn.post()->matrix() : CMatrix::Identity(scn.dimension(), scn.dimension());
}

// M -> sum_{k,l} <phi(a_l)|O|phi(a_k)> P_k M P_l, evaluated in the eigenbasis.
CMatrix apply_step(const CMatrix& m, const MeasurementStep& step, PointerOperatorKind kind) {
    const SpectralDecomposition& sd = step.observable.decomposition();
    const Eigen::Index d = sd.eigenvalues.size();
    CMatrix rotated = sd.eigenvectors.adjoint() * m * sd.eigenvectors;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            rotated(i, k) *= matrix_element(step.pointer, kind, sd.eigenvalues(k), sd.eigenvalues(i));
        }
    }
    return sd.eigenvectors * rotated * sd.eigenvectors.adjoint();
}

double postselection_probability(const Scenario& scn) {
    const double p = scn.post() ? (scn.post()->matrix() * scn.initial().matrix()).trace().real() : 1.0;
    if (!(p > kZeroProbabilityTol)) {
        std::ostringstream os;
        os << "post-selection probability Tr(E rho) = " << p << " is below " << kZeroProbabilityTol;
        throw Error(ErrorCode::ZeroPostSelectionProbability, os.str());
    }
    return p;
}

}  // namespace

MomentResult exact_moment(const Scenario& scn, const MomentPattern& pat) {
    require_pattern(scn, pat);
    CMatrix numerator = scn.initial().matrix();
    CMatrix normalizer = scn.initial().matrix();
    for (std::size_t j = 0; j < scn.size(); ++j) {
        numerator = apply_step(numerator, scn.steps()[j], pat[j]);
        normalizer = apply_step(normalizer, scn.steps()[j], PointerOperatorKind::Identity);
    }
    const CMatrix e = effect_or_identity(scn);
    const double trace_eta = (e * normalizer).trace().real();
    if (!(trace_eta > kZeroProbabilityTol)) {
        std::ostringstream os;
        os << "post-selection probability Tr(eta) = " << trace_eta << " is below " << kZeroProbabilityTol;
        throw Error(ErrorCode::ZeroPostSelectionProbability, os.str());
    }
    const Complex value = (e * numerator).trace() / trace_eta;
    if (!std::isfinite(value.real()) || std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
        std::ostringstream os;
        os << "exact moment has imaginary residue " << value.imag();
        throw Error(ErrorCode::NumericFailure, os.str());
    }
    // Without post-selection Tr(eta) = Tr(rho) = 1 analytically.
    const double probability = scn.post() ? std::min(trace_eta, 1.0) : 1.0;
    return {value.real(), probability, MomentMethod::Exact};
}

MomentResult weak_prediction(const Scenario& scn, const MomentPattern& pat) {
    require_pattern(scn, pat);
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < pat.size(); ++j) {
        switch (pat[j]) {
            case PointerOperatorKind::Identity:
                break;
            case PointerOperatorKind::Position:
            case PointerOperatorKind::Momentum:
                active.push_back(j);
                break;
            default:
                throw Error(ErrorCode::UnsupportedKind, std::string("weak-regime engine does not support ") +
                                                            std::string(to_string(pat[j])) +
                                                            "; use the exact engine");
        }
    }
    const double p = postselection_probability(scn);
    if (active.empty()) return {1.0, p, MomentMethod::WeakRegime};

    const CMatrix e = effect_or_identity(scn);
    const CMatrix& rho = scn.initial().matrix();
    const std::size_t m = active.size();
    auto obs = [&](std::size_t a) -> const CMatrix& { return scn.steps()[active[a]].observable.matrix(); };
    auto is_momentum = [&](std::size_t a) { return pat[active[a]] == PointerOperatorKind::Momentum; };

    std::size_t momentum_count = 0;
    double prefactor = 1.0;
    for (std::size_t a = 0; a < m; ++a) {
        if (is_momentum(a)) {
            ++momentum_count;
            const double s = scn.steps()[active[a]].pointer.sigma();
            prefactor /= 2.0 * s * s;
        }
    }
    if ((momentum_count / 2) % 2 == 1) prefactor = -prefactor;
    const bool take_imag = momentum_count % 2 == 1;

    // Sum over s_2..s_m: Tr(E A_m^{1-s_m} ... A_2^{1-s_2} A_1 rho A_2^{s_2} ... A_m^{s_m}).
    double sum = 0.0;
    const std::size_t combos = std::size_t{1} << (m - 1);
    for (std::size_t bits = 0; bits < combos; ++bits) {
        CMatrix left = obs(0);
        CMatrix right = CMatrix::Identity(rho.rows(), rho.cols());
        int sign = 1;
        for (std::size_t a = 1; a < m; ++a) {
            const bool s = (bits >> (a - 1)) & 1U;
            if (s) {
                right = right * obs(a);
                if (is_momentum(a)) sign = -sign;
            } else {
                left = obs(a) * left;
            }
        }
        const Complex tr = (e * left * rho * right).trace() / p;
        sum += sign * (take_imag ? tr.imag() : tr.real());
    }
    return {prefactor * sum / static_cast<double>(combos), p, MomentMethod::WeakRegime};
}

MomentResult evaluate_moment(const Scenario& scn, const MomentPattern& pat, MomentMethod method) {
    return method == MomentMethod::Exact ? exact_moment(scn, pat) : weak_prediction(scn, pat);
}

Complex recover_weak_value(const Scenario& scn, MomentMethod source) {
    const std::size_t n = scn.size();
    // Without post-selection a momentum readout of the last pointer vanishes.
    const std::size_t free_slots = scn.post() ? n : n - 1;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t subset = 0; subset < (std::size_t{1} << free_slots); ++subset) {
        std::vector<PointerOperatorKind> kinds(n, PointerOperatorKind::Position);
        double weight = 1.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < free_slots; ++j) {
            if ((subset >> j) & 1U) {
                kinds[j] = PointerOperatorKind::Momentum;
                const double s = scn.steps()[j].pointer.sigma();
                weight *= 2.0 * s * s;
                ++count;
            }
        }
        if ((count / 2) % 2 == 1) weight = -weight;
        const double moment = evaluate_moment(scn, MomentPattern(std::move(kinds)), source).value;
        (count % 2 == 0 ? re : im) += weight * moment;
    }
    return {re, im};
}

double nested_anticommutator_value(const CMatrix& rho, std::span<const CMatrix> observables) {
    if (observables.empty()) {
        throw Error(ErrorCode::EmptyList, "nested anti-commutator needs at least one observable");
    }
    for (const CMatrix& a : observables) {
        if (a.rows() != rho.rows()) {
            throw Error(ErrorCode::DimensionMismatch, "nested anti-commutator: dimensions differ");
        }
    }
    CMatrix nested = observables.back();
    for (std::size_t j = observables.size() - 1; j-- > 0;) {
        nested = observables[j] * nested + nested * observables[j];
    }
    return (nested * rho).trace().real() / std::ldexp(1.0, static_cast<int>(observables.size()) - 1);
}

double nested_anticommutator_value(const MixedState& rho, const MeasurementSequence& seq) {
    if (rho.dimension() != seq.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "nested anti-commutator: state and observables differ in dimension");
    }
    std::vector<CMatrix> mats;
    mats.reserve(seq.size());
    for (const Observable& a : seq.observables()) mats.push_back(a.matrix());
    return nested_anticommutator_value(rho.matrix(), mats);
}

SingleMeasurementStats single_measurement_stats(const MixedState& rho, const std::optional<PovmElement>& post,
                                                const Observable& a, const GaussianPointer& ptr) {
    if (a.dimension() != rho.dimension() || (post && post->dimension() != rho.dimension())) {
        throw Error(ErrorCode::DimensionMismatch, "single_measurement_stats: dimensions differ");
    }
    const Eigen::Index d = rho.dimension();
    const CMatrix e = post ? post->matrix() : CMatrix::Identity(d, d);
    const CMatrix& am = a.matrix();
    const CMatrix& r = rho.matrix();
    const Complex wv = generalized_weak_value(r, e, am);
    const double p = (e * r).trace().real();
    const Complex wv_sq = (e * am * am * r).trace() / p;
    const double cross = (e * am * r * am).trace().real() / p;
    const double s2 = ptr.sigma() * ptr.sigma();

    SingleMeasurementStats out{};
    out.mean_x = wv.real();
    out.mean_p = wv.imag() / (2.0 * s2);
    out.var_x = s2 + 0.5 * (wv_sq.real() + cross) - out.mean_x * out.mean_x;
    out.var_p = (s2 - 0.5 * (wv_sq.real() - cross) - wv.imag() * wv.imag()) / (4.0 * s2 * s2);
    return out;
}

bool scenario_weak_regime(const Scenario& scn, double ratio) {
    const double wv = std::abs(seq_weak_value(scn.initial(), scn.post(), scn.sequence()).value);
    for (const MeasurementStep& step : scn.steps()) {
        const RVector& ev = step.observable.decomposition().eigenvalues;
        if (!weak_regime_check(step.pointer, std::span<const double>(ev.data(), ev.size()), wv, ratio)) {
            return false;
        }
    }
    return true;
}

}  // namespace weaklab
