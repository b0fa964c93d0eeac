#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "weaklab/random.hpp"
#include "weaklab/scenarios.hpp"

using namespace weaklab;

namespace {

const MomentPattern kXX = MomentPattern::parse("xx");

std::pair<double, double> hull_of(const Scenario& scn) {
    std::vector<Observable> obs;
    for (const auto& s : scn.steps()) obs.push_back(s.observable);
    return spectrum_hull(obs);
}

}  // namespace

TEST_CASE("illustrative kets") {
    CHECK(illustrative_ket(1).amplitudes()(0).real() == doctest::Approx(0.5));
    CHECK(illustrative_ket(1).amplitudes()(1).real() == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(illustrative_ket(2).amplitudes()(1).real() == doctest::Approx(-std::sqrt(3.0) / 2));
    CHECK_ERROR_CODE(build_illustrative(0.0, 1.0), ErrorCode::InvalidArgument);
}

TEST_CASE("illustrative closed forms over log-spaced widths") {
    for (int i = 0; i < 20; ++i) {
        const double s1 = 0.05 * std::pow(100.0 / 0.05, i / 19.0);
        Scenario scn = build_illustrative(s1, 1.0 + i);
        const double e = std::exp(-1.0 / (8 * s1 * s1));
        const double xx = (1 - 3 * e) / 16;
        CHECK(std::abs(exact_moment(scn, kXX).value - xx) <= 1e-12 * std::abs(xx));
        CHECK(std::abs(exact_moment(scn, MomentPattern::parse("xi")).value - 0.25) <= 1e-12 * 0.25);
        const double x2 = (5 - 3 * e) / 8;
        CHECK(std::abs(exact_moment(scn, MomentPattern::parse("ix")).value - x2) <= 1e-12 * x2);
    }
    CHECK(std::abs(exact_moment(build_illustrative(0.05, 1), kXX).value - 1.0 / 16) < 1e-3);
    CHECK(std::abs(exact_moment(build_illustrative(100, 1), kXX).value + 1.0 / 8) < 5e-4);
}

TEST_CASE("pauli scenario") {
    Scenario scn = build_pauli_xy(2.0, 3.0);
    CHECK(std::abs(seq_weak_value(scn.initial(), scn.post(), scn.sequence()).value - Complex(0, 1)) < 1e-15);
    CHECK(weak_prediction(scn, MomentPattern::parse("px")).value == doctest::Approx(1.0 / 8.0));
    CHECK(std::abs(weak_prediction(scn, kXX).value) < 1e-15);
}

TEST_CASE("projector chain") {
    Scenario four = build_projector_chain(4, 1.0);
    CHECK(seq_weak_value(four.initial(), four.post(), four.sequence()).value.real() ==
          doctest::Approx(-0.34656781).epsilon(1e-8));
    CHECK(four.size() == 4);
    CHECK_ERROR_CODE(build_projector_chain(0, 1.0), ErrorCode::InvalidArgument);
    double prev = 0.0;
    for (int n = 2; n <= 12; ++n) {
        Scenario c = build_projector_chain(n, 1.0);
        double v = seq_weak_value(c.initial(), c.post(), c.sequence()).value.real();
        if (n == 2) CHECK(v == doctest::Approx(-0.125).epsilon(1e-15));
        if (n > 2) CHECK(v < prev);
        prev = v;
    }
    CHECK(prev > -1.0);
}

TEST_CASE("common cause examples") {
    Observable p0 = projector_from_ket(PureState::basis(2, 0));
    Scenario prod = build_common_cause(PureState::basis(4, 0), p0, p0, 1.0, 1.0);
    CHECK(exact_moment(prod, kXX).value == doctest::Approx(1.0).epsilon(1e-12));
    CVector bell = CVector::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    Scenario ent = build_common_cause(PureState(bell), p0, p0, 0.3, 2.0);
    CHECK(exact_moment(ent, kXX).value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_ERROR_CODE(build_common_cause(PureState::basis(3, 0), p0, p0, 1, 1), ErrorCode::DimensionMismatch);
}

TEST_CASE("common cause moments are expectation values and never witness") {
    random::Rng rng(301);
    std::uniform_real_distribution<double> logsig(std::log(0.05), std::log(100.0));
    for (int trial = 0; trial < 1000; ++trial) {
        PureState psi = random::pure_state(4, rng);
        Observable a = random::projector(2, 1, rng), b = random::projector(2, 1, rng);
        Scenario scn = build_common_cause(psi, a, b, std::exp(logsig(rng)), std::exp(logsig(rng)));
        const double m = exact_moment(scn, kXX).value;
        const CMatrix ab = tensor(a, b).matrix();
        const double expect = (psi.amplitudes().adjoint() * ab * psi.amplitudes())(0, 0).real();
        CHECK(std::abs(m - expect) < 1e-12);
        CHECK(causal_witness(m, hull_of(scn), 1e-9).verdict == CausalVerdictKind::Inconclusive);
    }
}

TEST_CASE("causal witness") {
    CHECK(causal_witness(-0.125, {0, 1}, 0.01).verdict == CausalVerdictKind::DirectCauseWitnessed);
    CHECK(causal_witness(0.5, {0, 1}, 0.01).verdict == CausalVerdictKind::Inconclusive);
    CHECK(causal_witness(-0.005, {0, 1}, 0.01).verdict == CausalVerdictKind::Inconclusive);
    CHECK(causal_witness(1.02, {0, 1}, 0.01).verdict == CausalVerdictKind::DirectCauseWitnessed);
    CHECK(causal_witness(1.0, {0, 1}, 0.0).verdict == CausalVerdictKind::Inconclusive);
    CHECK_ERROR_CODE(causal_witness(0.0, {0, 1}, -1.0), ErrorCode::InvalidArgument);
    auto v = causal_witness(-0.2, {0, 1}, 0.0);
    CHECK(v.moment == -0.2);
    CHECK(v.hull.second == 1.0);

    Scenario ill = build_illustrative(100, 100);
    auto w = causal_witness(exact_moment(ill, kXX).value, hull_of(ill), 0.01);
    CHECK(w.verdict == CausalVerdictKind::DirectCauseWitnessed);
}
