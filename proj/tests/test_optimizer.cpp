#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <numbers>

#include "test_support.hpp"
#include "weaklab/optimizer.hpp"
#include "weaklab/random.hpp"
#include "weaklab/scenarios.hpp"

using namespace weaklab;

namespace {

// Values below the pair bound would be a counterexample to the conjectured
// bound; report loudly instead of failing quietly.
void check_pair_bound(const OptimizationResult& r, int n) {
    if (r.best_value < -0.125 - 1e-9) {
        std::cerr << "FINDING: pointer product " << r.best_value << " below -1/8 for n=" << n << '\n';
    }
    CHECK_MESSAGE(r.best_value >= -0.125 - 1e-9, "conjectured -1/8 bound violated for n=" << n);
}

}  // namespace

TEST_CASE("state encoding round-trips") {
    random::Rng rng(401);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 7;
        PureState psi = random::pure_state(d, rng);
        auto params = encode_state(psi);
        CHECK(params.size() == params_per_state(d));
        PureState back = decode_state(params, d);
        CHECK(std::abs(std::abs(back.amplitudes().dot(psi.amplitudes())) - 1.0) < 1e-12);
    }
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 7;
        std::vector<double> p(params_per_state(d));
        for (double& v : p) v = u(rng);
        CHECK(std::abs(decode_amplitudes(p, d).norm() - 1.0) < 1e-12);
    }
    CHECK_ERROR_CODE(decode_amplitudes(std::vector<double>(3), 2), ErrorCode::InvalidDimensions);
}

TEST_CASE("search point flattening") {
    SearchSpacePoint p{{0.1, 0.2}, {{1, 2}, {3, 4}, {5, 6}}};
    auto flat = p.flatten();
    CHECK(flat.size() == 8);
    auto q = SearchSpacePoint::unflatten(flat, 3, 2);
    CHECK(q.state_params == p.state_params);
    CHECK(q.projector_params == p.projector_params);
    CHECK_ERROR_CODE(SearchSpacePoint::unflatten(flat, 2, 2), ErrorCode::InvalidDimensions);
}

TEST_CASE("objectives at the illustrative configuration") {
    SearchSpacePoint p{encode_state(PureState::basis(2, 0)),
                       {encode_state(illustrative_ket(1)), encode_state(illustrative_ket(2))}};
    CHECK(evaluate_objective(OptimizerObjective::PointerProduct, p, 2) == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(evaluate_objective(OptimizerObjective::WeakValueReal, p, 2) == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(evaluate_objective(OptimizerObjective::ExactPointerProduct, p, 2, 1.0) ==
          doctest::Approx((1 - 3 * std::exp(-0.125)) / 16).epsilon(1e-12));
}

TEST_CASE("input validation") {
    CHECK_ERROR_CODE(minimize_pointer_product(1, 2, 1, 0, 10), ErrorCode::InvalidDimensions);
    CHECK_ERROR_CODE(minimize_pointer_product(2, 1, 1, 0, 10), ErrorCode::InvalidDimensions);
    CHECK_ERROR_CODE(minimize_pointer_product(2, 2, 0, 0, 10), ErrorCode::InvalidDimensions);
    CHECK_ERROR_CODE(minimize_weak_value_real(1, 2, 1, 0, 10), ErrorCode::InvalidDimensions);
}

TEST_CASE("two projectors reach -1/8") {
    auto r = minimize_pointer_product(2, 2, 64, 1, 20000);
    CHECK(std::abs(r.best_value + 0.125) < 1e-6);
    check_pair_bound(r, 2);
    auto w = minimize_weak_value_real(2, 2, 64, 1, 20000);
    CHECK(std::abs(w.best_value + 0.125) < 1e-6);
}

TEST_CASE("start at the known optimum stays there") {
    OptimizerConfig cfg;
    cfg.n = 2;
    cfg.d = 2;
    cfg.restarts = 1;
    cfg.start = SearchSpacePoint{encode_state(PureState::basis(2, 0)),
                                 {encode_state(illustrative_ket(1)), encode_state(illustrative_ket(2))}};
    auto r = minimize(cfg);
    CHECK(std::abs(r.best_value + 0.125) < 1e-9);
}

TEST_CASE("three projectors do not beat -1/8") {
    auto r = minimize_pointer_product(3, 2, 64, 7, 20000);
    CHECK(std::abs(r.best_value + 0.125) < 1e-4);
    check_pair_bound(r, 3);
}

TEST_CASE("weak value approaches -1 along the chain") {
    for (int n : {3, 4, 6}) {
        auto r = minimize_weak_value_real(n, 2, 32, 3, 20000);
        const double chain = -std::pow(std::cos(std::numbers::pi / (n + 1)), n + 1);
        CHECK(r.best_value <= chain + 1e-6);
        CHECK(r.best_value >= -1.0 - 1e-9);
    }
}

TEST_CASE("result bookkeeping and determinism") {
    OptimizerConfig cfg;
    cfg.n = 3;
    cfg.d = 2;
    cfg.restarts = 8;
    cfg.seed = 99;
    cfg.budget = 3000;
    cfg.threads = 1;
    auto serial = minimize(cfg);
    cfg.threads = 4;
    auto parallel = minimize(cfg);
    CHECK(serial.best_value == parallel.best_value);
    CHECK(serial.best_point.flatten() == parallel.best_point.flatten());
    CHECK(serial.evaluations == parallel.evaluations);
    CHECK(serial.trace == parallel.trace);
    CHECK(serial.restarts_used == 8);
    double m = 1e300;
    for (auto& [idx, v] : serial.trace) m = std::min(m, v);
    CHECK(serial.best_value == m);
    CHECK(evaluate_objective(cfg.objective, serial.best_point, 2) == doctest::Approx(serial.best_value).epsilon(1e-12));
    for (auto& [idx, v] : serial.trace) CHECK(v >= -0.125 - 1e-9);
    CHECK(serial.evaluations <= 8 * (3000 + 20));
}

TEST_CASE("budget caps evaluations") {
    auto r = minimize_pointer_product(4, 3, 2, 5, 50);
    CHECK(r.evaluations <= 2 * (50 + 20));
}
