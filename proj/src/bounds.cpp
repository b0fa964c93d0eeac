#include "weaklab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weaklab/random.hpp"
#include "weaklab/weak_values.hpp"

namespace weaklab {

namespace {

random::Rng suite_rng(std::uint64_t seed, std::uint32_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt};
    return random::Rng(seq);
}

void record(BoundSuiteReport& rep, double value, double margin, double tol) {
    ++rep.trials;
    if (rep.trials == 1 || margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_value = value;
    }
    if (margin < -tol) ++rep.violations;
}

}  // namespace

BoundSuiteReport projector_pair_suite(std::uint64_t trials, std::uint64_t seed) {
    BoundSuiteReport rep{"projector-pair -1/8"};
    auto rng = suite_rng(seed, 1);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Eigen::Index d = (t % 2 == 0) ? 2 : 3;
        std::uniform_int_distribution<Eigen::Index> rank(1, d - 1);
        const PureState psi = random::pure_state(d, rng);
        const Observable a = random::projector(d, rank(rng), rng);
        const Observable b = random::projector(d, rank(rng), rng);
        const ProjectorPairReport r = projector_pair_report(psi, a, b);
        record(rep, r.re_value, r.re_value + 0.125, 1e-12);
    }
    return rep;
}

BoundSuiteReport norm_product_suite(std::uint64_t trials, std::uint64_t seed) {
    BoundSuiteReport rep{"norm-product"};
    auto rng = suite_rng(seed, 2);
    std::uniform_int_distribution<int> n_dist(1, 5);
    std::uniform_int_distribution<Eigen::Index> d_dist(2, 4);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int n = n_dist(rng);
        const Eigen::Index d = d_dist(rng);
        std::vector<Observable> obs;
        for (int j = 0; j < n; ++j) {
            const double s = scale(rng);
            obs.push_back(random::hermitian(d, -s, s, rng));
        }
        const MeasurementSequence seq(std::move(obs));
        std::uniform_int_distribution<Eigen::Index> rank(1, d);
        const MixedState rho = random::mixed_state(d, rank(rng), rng);
        const double magnitude = std::abs(seq_weak_value(rho, std::nullopt, seq).value);
        record(rep, magnitude, norm_product_bound(seq) - magnitude, 1e-12);
    }
    return rep;
}

BoundSuiteReport commuting_hull_suite(std::uint64_t trials, std::uint64_t seed) {
    BoundSuiteReport rep{"commuting-hull"};
    auto rng = suite_rng(seed, 3);
    std::uniform_int_distribution<int> n_dist(2, 4);
    std::uniform_int_distribution<Eigen::Index> d_dist(2, 4);
    std::uniform_real_distribution<double> eig(-1.0, 1.0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int n = n_dist(rng);
        const Eigen::Index d = d_dist(rng);
        const CMatrix u = random::unitary(d, rng);
        std::vector<Observable> obs;
        for (int j = 0; j < n; ++j) {
            RVector ev(d);
            for (Eigen::Index i = 0; i < d; ++i) ev(i) = eig(rng);
            const CMatrix m = u * ev.cast<Complex>().asDiagonal() * u.adjoint();
            obs.push_back(Observable((m + m.adjoint()) * 0.5));
        }
        const auto hull = spectrum_hull(obs);
        const MeasurementSequence seq(std::move(obs));
        const MixedState rho = random::mixed_state(d, 1 + static_cast<Eigen::Index>(t % static_cast<std::uint64_t>(d)), rng);
        const double re = seq_weak_value(rho, std::nullopt, seq).value.real();
        record(rep, re, std::min(re - hull.first, hull.second - re), 1e-12);
    }
    return rep;
}

}  // namespace weaklab
