#include "weaklab/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "weaklab/simulator.hpp"

namespace weaklab {

namespace {

void require_dimensions(int n, int d, int restarts) {
    if (n < 2 || d < 2 || restarts < 1) {
        throw Error(ErrorCode::InvalidDimensions, "optimizer requires n >= 2, d >= 2 and restarts >= 1 (got n=" +
                                                      std::to_string(n) + ", d=" + std::to_string(d) +
                                                      ", restarts=" + std::to_string(restarts) + ")");
    }
}

CMatrix rank_one(const CVector& v) { return v * v.adjoint(); }

Complex phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct RestartOutcome {
    double value;
    std::vector<double> point;
    std::int64_t evaluations;
};

// Nelder-Mead with dimension-adaptive coefficients. Stops when every vertex
// lies within diameter_tol of the best one or the budget is spent.
template <class F>
RestartOutcome nelder_mead(F&& f, std::vector<double> x0, double step, double diameter_tol, std::int64_t budget) {
    const std::size_t dim = x0.size();
    const double nd = static_cast<double>(dim);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / nd;
    const double gamma = 0.75 - 1.0 / (2.0 * nd);
    const double delta = 1.0 - 1.0 / nd;

    std::int64_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    auto affine = [&](double t, const std::vector<double>& from, std::vector<double>& out) {
        for (std::size_t k = 0; k < dim; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
    };

    while (evals < budget) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[dim - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            double dist = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dist = std::max(dist, std::abs(simplex[i][k] - simplex[best][k]));
            diameter = std::max(diameter, dist);
        }
        if (diameter < diameter_tol) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / nd;
        }

        affine(-alpha, simplex[worst], trial);
        const double fr = eval(trial);
        if (fr < values[best]) {
            affine(-alpha * beta, simplex[worst], trial2);
            const double fe = eval(trial2);
            if (fe < fr) {
                simplex[worst] = trial2;
                values[worst] = fe;
            } else {
                simplex[worst] = trial;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = trial;
            values[worst] = fr;
            continue;
        }
        if (fr < values[worst]) {
            affine(-alpha * gamma, simplex[worst], trial2);  // outside contraction
            const double fc = eval(trial2);
            if (fc <= fr) {
                simplex[worst] = trial2;
                values[worst] = fc;
                continue;
            }
        } else {
            affine(gamma, simplex[worst], trial2);  // inside contraction
            const double fc = eval(trial2);
            if (fc < values[worst]) {
                simplex[worst] = trial2;
                values[worst] = fc;
                continue;
            }
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < dim; ++k) {
                simplex[i][k] = simplex[best][k] + delta * (simplex[i][k] - simplex[best][k]);
            }
            values[i] = eval(simplex[i]);
        }
    }
    const auto it = std::min_element(values.begin(), values.end());
    const std::size_t idx = static_cast<std::size_t>(it - values.begin());
    return {*it, simplex[idx], evals};
}

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

}  // namespace

std::size_t params_per_state(int d) { return static_cast<std::size_t>(2 * (d - 1)); }

std::vector<double> SearchSpacePoint::flatten() const {
    std::vector<double> out = state_params;
    for (const auto& p : projector_params) out.insert(out.end(), p.begin(), p.end());
    return out;
}

SearchSpacePoint SearchSpacePoint::unflatten(std::span<const double> flat, int n, int d) {
    const std::size_t per = params_per_state(d);
    if (flat.size() != per * static_cast<std::size_t>(n + 1)) {
        throw Error(ErrorCode::InvalidDimensions, "parameter vector length does not match n and d");
    }
    SearchSpacePoint p;
    p.state_params.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(per));
    for (int j = 0; j < n; ++j) {
        const auto begin = flat.begin() + static_cast<std::ptrdiff_t>(per * static_cast<std::size_t>(j + 1));
        p.projector_params.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(per));
    }
    return p;
}

CVector decode_amplitudes(std::span<const double> params, int d) {
    if (d < 2 || params.size() != params_per_state(d)) {
        throw Error(ErrorCode::InvalidDimensions, "state parameters must have 2(d-1) entries");
    }
    const std::size_t m = static_cast<std::size_t>(d - 1);
    CVector v(d);
    double sin_prod = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double modulus = sin_prod * std::cos(params[k]);
        v(static_cast<Eigen::Index>(k)) = k == 0 ? Complex(modulus) : modulus * phase(params[m + k - 1]);
        sin_prod *= std::sin(params[k]);
    }
    v(d - 1) = sin_prod * phase(params[2 * m - 1]);
    return v / v.norm();
}

PureState decode_state(std::span<const double> params, int d) { return PureState(decode_amplitudes(params, d)); }

std::vector<double> encode_state(const PureState& state) {
    const Eigen::Index d = state.dimension();
    const std::size_t m = static_cast<std::size_t>(d - 1);
    std::vector<double> params(2 * m, 0.0);
    const CVector& v = state.amplitudes();
    const double global = std::arg(v(0));
    for (std::size_t k = 0; k < m; ++k) {
        double tail = 0.0;
        for (Eigen::Index i = static_cast<Eigen::Index>(k); i < d; ++i) tail += std::norm(v(i));
        params[k] = std::atan2(std::sqrt(std::max(0.0, tail - std::norm(v(static_cast<Eigen::Index>(k))))),
                               std::abs(v(static_cast<Eigen::Index>(k))));
        params[m + k] = std::arg(v(static_cast<Eigen::Index>(k + 1))) - global;
    }
    return params;
}

std::string_view to_string(OptimizerObjective objective) {
    switch (objective) {
        case OptimizerObjective::PointerProduct: return "pointer-product";
        case OptimizerObjective::WeakValueReal: return "weak-value";
        case OptimizerObjective::ExactPointerProduct: return "exact-pointer-product";
    }
    return "unknown";
}

double evaluate_objective(OptimizerObjective objective, const SearchSpacePoint& point, int d, double exact_sigma) {
    const CVector psi = decode_amplitudes(point.state_params, d);
    std::vector<CVector> kets;
    for (const auto& p : point.projector_params) kets.push_back(decode_amplitudes(p, d));
    switch (objective) {
        case OptimizerObjective::PointerProduct: {
            std::vector<CMatrix> projectors;
            for (const CVector& k : kets) projectors.push_back(rank_one(k));
            return nested_anticommutator_value(rank_one(psi), projectors);
        }
        case OptimizerObjective::WeakValueReal: {
            // <psi|a_n><a_n|a_(n-1)> ... <a_1|psi>
            Complex amp = kets.front().dot(psi);
            for (std::size_t j = 1; j < kets.size(); ++j) amp *= kets[j].dot(kets[j - 1]);
            amp *= psi.dot(kets.back());
            return amp.real();
        }
        case OptimizerObjective::ExactPointerProduct: {
            std::vector<MeasurementStep> steps;
            for (const CVector& k : kets) {
                steps.push_back({Observable(rank_one(k)), GaussianPointer(exact_sigma)});
            }
            const Scenario scn(MixedState(rank_one(psi)), std::move(steps));
            return exact_moment(scn, MomentPattern::uniform(kets.size(), PointerOperatorKind::Position)).value;
        }
    }
    return 0.0;
}

unsigned default_worker_count() {
    if (const char* env = std::getenv("WEAKLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

OptimizationResult minimize(const OptimizerConfig& config) {
    require_dimensions(config.n, config.d, config.restarts);
    if (config.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
    const std::size_t dim = params_per_state(config.d) * static_cast<std::size_t>(config.n + 1);
    if (config.start) {
        const auto flat = config.start->flatten();
        if (flat.size() != dim) throw Error(ErrorCode::InvalidDimensions, "start point does not match n and d");
    }

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
    auto run = [&](int r) {
        std::vector<double> x0(dim);
        if (r == 0 && config.start) {
            x0 = config.start->flatten();
        } else {
            auto rng = restart_rng(config.seed, r);
            std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
            for (double& v : x0) v = unif(rng);
        }
        auto f = [&](const std::vector<double>& x) {
            const double v = evaluate_objective(config.objective, SearchSpacePoint::unflatten(x, config.n, config.d),
                                                config.d, config.exact_sigma);
            return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        };
        outcomes[static_cast<std::size_t>(r)] =
            nelder_mead(f, std::move(x0), config.initial_step, config.diameter_tol, config.budget);
    };

    const unsigned workers =
        std::min<unsigned>(config.threads ? config.threads : default_worker_count(), static_cast<unsigned>(config.restarts));
    if (workers <= 1) {
        for (int r = 0; r < config.restarts; ++r) run(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next++; r < config.restarts; r = next++) run(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    OptimizationResult result{std::numeric_limits<double>::infinity(), {}, 0, config.restarts, {}};
    std::size_t best = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        result.evaluations += outcomes[r].evaluations;
        result.trace.emplace_back(static_cast<int>(r), outcomes[r].value);
        if (outcomes[r].value < result.best_value) {  // strict: lowest index wins ties
            result.best_value = outcomes[r].value;
            best = r;
        }
    }
    result.best_point = SearchSpacePoint::unflatten(outcomes[best].point, config.n, config.d);
    return result;
}

OptimizationResult minimize_pointer_product(int n, int d, int restarts, std::uint64_t seed, std::int64_t budget) {
    OptimizerConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.budget = budget;
    cfg.objective = OptimizerObjective::PointerProduct;
    return minimize(cfg);
}

OptimizationResult minimize_weak_value_real(int n, int d, int restarts, std::uint64_t seed, std::int64_t budget) {
    OptimizerConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.budget = budget;
    cfg.objective = OptimizerObjective::WeakValueReal;
    return minimize(cfg);
}

}  // namespace weaklab
