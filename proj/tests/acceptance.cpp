// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "weaklab/bounds.hpp"
#include "weaklab/cli.hpp"
#include "weaklab/optimizer.hpp"
#include "weaklab/random.hpp"
#include "weaklab/sampler.hpp"
#include "weaklab/scenarios.hpp"
#include "weaklab/weak_values.hpp"

using namespace weaklab;
using K = PointerOperatorKind;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::pair<double, double> hull_of(const Scenario& scn) {
    std::vector<Observable> obs;
    for (const auto& s : scn.steps()) obs.push_back(s.observable);
    return spectrum_hull(obs);
}

double log_uniform(random::Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

Scenario random_no_post(random::Rng& rng, int n, int d) {
    std::vector<MeasurementStep> steps;
    for (int j = 0; j < n; ++j)
        steps.push_back({random::hermitian(d, -1.0, 1.0, rng), GaussianPointer(log_uniform(rng, 0.05, 100.0))});
    std::uniform_int_distribution<int> rank(1, d);
    return Scenario(random::mixed_state(d, rank(rng), rng), std::move(steps));
}

std::string run_cli_capture(std::vector<std::string> args) {
    args.insert(args.begin(), "weaklab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str();
}

Outcome illustrative_closed_form(double& limit) {
    limit = 1.0;
    Outcome o;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double s1 = 0.05 * std::pow(100.0 / 0.05, i / 19.0);
        for (double s2 : {0.1, 1.0, 37.0}) {
            const double want = (1 - 3 * std::exp(-1.0 / (8 * s1 * s1))) / 16;
            worst = std::max(worst, rel_err(exact_moment(build_illustrative(s1, s2), MomentPattern::parse("xx")).value, want));
        }
    }
    o.require(worst <= 1e-12, "relative error " + fmt(worst));
    o.detail = o.ok ? "max relative error " + fmt(worst) : o.detail;
    return o;
}

Outcome limits(double&) {
    Outcome o;
    const auto xx = MomentPattern::parse("xx");
    const double weak = exact_moment(build_illustrative(100, 1), xx).value;
    const double strong = exact_moment(build_illustrative(0.05, 1), xx).value;
    o.require(std::abs(weak + 0.125) <= 5e-4, "sigma1=100 gives " + fmt(weak));
    o.require(std::abs(strong - 0.0625) <= 1e-3, "sigma1=0.05 gives " + fmt(strong));
    for (int i = 0; i < 40; ++i) {
        const double s1 = 0.01 * std::pow(1e4, i / 39.0);
        Scenario scn = build_illustrative(s1, 2.0);
        const double x1 = exact_moment(scn, MomentPattern::parse("xi")).value;
        const double x2 = exact_moment(scn, MomentPattern::parse("ix")).value;
        const double want2 = (5 - 3 * std::exp(-1.0 / (8 * s1 * s1))) / 8;
        o.require(std::abs(x1 - 0.25) <= 1e-12, "<x1> = " + fmt(x1));
        o.require(std::abs(x2 - want2) <= 1e-12, "<x2> = " + fmt(x2));
        o.require(x2 >= 0.25 - 1e-12 && x2 <= 0.625 + 1e-12, "<x2> outside [1/4, 5/8]");
    }
    if (o.ok) o.detail = "sigma1=100: " + fmt(weak) + ", sigma1=0.05: " + fmt(strong);
    return o;
}

Outcome pauli_imaginary(double&) {
    Outcome o;
    const Complex ex = recover_weak_value(build_pauli_xy(50, 50), MomentMethod::Exact);
    const Complex wk = recover_weak_value(build_pauli_xy(50, 50), MomentMethod::WeakRegime);
    o.require(std::abs(ex - Complex(0, 1)) <= 1e-3, "exact recovery " + fmt(ex.real()) + "+" + fmt(ex.imag()) + "i");
    o.require(std::abs(wk - Complex(0, 1)) <= 1e-12, "weak recovery off");
    if (o.ok) o.detail = "exact " + fmt(ex.real()) + "+" + fmt(ex.imag()) + "i";
    return o;
}

Outcome chain(double&) {
    Outcome o;
    double prev = 0.0;
    for (int n = 2; n <= 8; ++n) {
        Scenario c = build_projector_chain(n, 1.0);
        const double v = seq_weak_value(c.initial(), c.post(), c.sequence()).value.real();
        const double want = -std::pow(std::cos(std::numbers::pi / (n + 1)), n + 1);
        o.require(std::abs(v - want) <= 1e-12, "n=" + std::to_string(n) + " gives " + fmt(v));
        if (n == 2) o.require(std::abs(v + 0.125) <= 1e-15, "n=2 is not -1/8");
        if (n > 2) o.require(v < prev, "not monotone at n=" + std::to_string(n));
        o.require(v > -1.0, "below -1");
        prev = v;
    }
    if (o.ok) o.detail = "n=8: " + fmt(prev);
    return o;
}

Outcome three_measurements(double&) {
    Outcome o;
    Scenario c = build_projector_chain(3, 50.0);
    const double v = exact_moment(c, MomentPattern::parse("xxx")).value;
    const CMatrix& a1 = c.steps()[0].observable.matrix();
    const CMatrix& a2 = c.steps()[1].observable.matrix();
    const CMatrix& a3 = c.steps()[2].observable.matrix();
    const CMatrix& rho = c.initial().matrix();
    const double combo = 0.5 * ((a3 * a2 * a1 * rho).trace().real() + (a2 * a3 * a1 * rho).trace().real());
    o.require(std::abs(combo + 0.125) <= 1e-12, "trace combination " + fmt(combo));
    o.require(std::abs(v - combo) <= 1e-2, "exact moment " + fmt(v));
    if (o.ok) o.detail = "exact " + fmt(v) + " vs " + fmt(combo);
    return o;
}

Outcome bound_suites(double& limit) {
    limit = 30.0;
    Outcome o;
    const auto pair = projector_pair_suite(10000, 6001);
    const auto norm = norm_product_suite(10000, 6002);
    o.require(pair.violations == 0, std::to_string(pair.violations) + " pair violations");
    o.require(norm.violations == 0, std::to_string(norm.violations) + " norm violations");
    if (o.ok) o.detail = "worst pair value " + fmt(pair.worst_value) + ", worst norm margin " + fmt(norm.worst_margin);
    return o;
}

Outcome invariants(double&) {
    Outcome o;
    random::Rng rng(7001);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 4, d = 2 + trial % 3;
        Scenario scn = random_no_post(rng, n, d);
        std::vector<K> kinds(n, K::Position);
        for (int j = 0; j + 1 < n; ++j) kinds[j] = K(trial % 5 == 0 ? 0 : (trial + j) % 5);
        kinds.back() = K::Momentum;
        const double p = exact_moment(scn, MomentPattern(kinds)).value;
        o.require(std::abs(p) <= 1e-12, "final momentum moment " + fmt(p));
        for (K last : {K::Identity, K::Position}) {
            kinds.back() = last;
            const double a = exact_moment(scn, MomentPattern(kinds)).value;
            const double b = exact_moment(scn.with_sigma(n - 1, log_uniform(rng, 0.05, 100.0)), MomentPattern(kinds)).value;
            o.require(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)), "final sigma dependence " + fmt(a - b));
        }
        if (n == 1) {
            const double mean = exact_moment(scn, MomentPattern::parse("x")).value;
            const double tr = (scn.steps()[0].observable.matrix() * scn.initial().matrix()).trace().real();
            o.require(std::abs(mean - tr) <= 1e-12, "single mean " + fmt(mean - tr));
        }
    }
    if (o.ok) o.detail = "1000 random scenarios";
    return o;
}

Outcome common_cause(double&) {
    Outcome o;
    random::Rng rng(8001);
    double lo = 1e300, hi = -1e300;
    const auto xx = MomentPattern::parse("xx");
    for (int trial = 0; trial < 1000; ++trial) {
        PureState psi = random::pure_state(4, rng);
        Observable a = random::projector(2, 1, rng), b = random::projector(2, 1, rng);
        Scenario scn = build_common_cause(psi, a, b, log_uniform(rng, 0.05, 100.0), log_uniform(rng, 0.05, 100.0));
        const double m = exact_moment(scn, xx).value;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        o.require(m >= -1e-9 && m <= 1 + 1e-9, "moment " + fmt(m));
        o.require(causal_witness(m, hull_of(scn), 1e-9).verdict == CausalVerdictKind::Inconclusive,
                  "common cause witnessed");
    }
    Scenario ill = build_illustrative(100, 100);
    const auto v = causal_witness(exact_moment(ill, xx).value, hull_of(ill), 1e-9);
    o.require(v.verdict == CausalVerdictKind::DirectCauseWitnessed, "illustrative not witnessed");
    if (o.ok) o.detail = "common-cause range [" + fmt(lo) + ", " + fmt(hi) + "]";
    return o;
}

Outcome optimizer_evidence(double& limit) {
    limit = 300.0;
    Outcome o;
    std::string values;
    for (int n = 2; n <= 5; ++n) {
        const auto r = minimize_pointer_product(n, 2, 64, 9000 + n, 20000);
        if (r.best_value < -0.125 - 1e-9)
            std::cout << "FINDING: pointer product " << fmt(r.best_value) << " below -1/8 at n=" << n << '\n';
        o.require(r.best_value >= -0.125 - 1e-9 && r.best_value <= -0.1245,
                  "n=" + std::to_string(n) + " best " + fmt(r.best_value));
        values += (values.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " + fmt(r.best_value);
    }
    if (o.ok) o.detail = values;
    return o;
}

Outcome sampler(double& limit) {
    limit = 60.0;
    Outcome o;
    Scenario scn = build_illustrative(5.0, 5.0);
    const auto xx = MomentPattern::parse("xx");
    const SampleSummary s = summarize_product(sample_outcomes(scn, 100000, 1), xx);
    const double exact = exact_moment(scn, xx).value;
    const double z = (s.mean - exact) / s.standard_error;
    o.require(std::abs(z) < 4.0, "z = " + fmt(z));
    const std::vector<std::string> args = {"sample", "illustrative", "--sigma1", "5", "--sigma2", "5",
                                           "--shots", "100000", "--seed", "1", "--format", "csv"};
    o.require(run_cli_capture(args) == run_cli_capture(args), "rerun differs");
    if (o.ok) o.detail = "z = " + fmt(z);
    return o;
}

}  // namespace

int main() {
    using Check = std::function<Outcome(double&)>;
    const std::vector<std::pair<std::string, Check>> criteria = {
        {"illustrative closed form", illustrative_closed_form},
        {"strong and weak limits", limits},
        {"imaginary Pauli weak value", pauli_imaginary},
        {"projector chain", chain},
        {"three-measurement formula", three_measurements},
        {"bound suites", bound_suites},
        {"exact-engine invariants", invariants},
        {"common-cause hull", common_cause},
        {"optimizer bound evidence", optimizer_evidence},
        {"sampler consistency", sampler},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        double limit = 0.0;  // seconds; zero means no runtime bound
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second(limit);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit > 0 && secs >= limit) {
            o.ok = false;
            o.detail += " (exceeded " + fmt(limit) + " s)";
        }
        failures += !o.ok;
        std::printf("%s %2zu %-28s %8.3f s  %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
