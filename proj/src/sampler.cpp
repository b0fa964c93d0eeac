#include "weaklab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace weaklab {

namespace {

struct StepBasis {
    const RVector* eigenvalues;
    const CMatrix* eigenvectors;
    double sigma;
};

// Enumerates (k_1..k_n, l_1..l_n) eigenindex tuples, accumulating
// <v_kn|v_k(n-1)>...<v_k1|rho|v_l1>...<v_l(n-1)|v_ln> times the pointer
// overlaps, and merges terms that share the same Gaussian centers.
class TermBuilder {
public:
    TermBuilder(const Scenario& scn, const std::vector<StepBasis>& steps, const CMatrix& effect)
        : scn_(scn), steps_(steps), effect_(effect), centers_(steps.size()) {}

    std::map<std::vector<double>, std::pair<double, double>> build() {
        const StepBasis& first = steps_.front();
        const CMatrix rho_eig = first.eigenvectors->adjoint() * scn_.initial().matrix() * *first.eigenvectors;
        const Eigen::Index d = first.eigenvalues->size();
        for (Eigen::Index k = 0; k < d; ++k) {
            for (Eigen::Index l = 0; l < d; ++l) {
                const Complex g = rho_eig(k, l) * overlap(0, k, l);
                if (g == Complex(0.0)) continue;
                centers_[0] = center(0, k, l);
                recurse(1, k, l, g);
            }
        }
        return std::move(terms_);
    }

private:
    double overlap(std::size_t j, Eigen::Index k, Eigen::Index l) const {
        const double diff = (*steps_[j].eigenvalues)(k) - (*steps_[j].eigenvalues)(l);
        return std::exp(-diff * diff / (8.0 * steps_[j].sigma * steps_[j].sigma));
    }

    double center(std::size_t j, Eigen::Index k, Eigen::Index l) const {
        return 0.5 * ((*steps_[j].eigenvalues)(k) + (*steps_[j].eigenvalues)(l));
    }

    void recurse(std::size_t j, Eigen::Index k, Eigen::Index l, Complex g) {
        if (j == steps_.size()) {
            const CMatrix& v = *steps_.back().eigenvectors;
            const Complex selected = g * v.col(l).dot(effect_ * v.col(k));
            const double unselected = k == l ? g.real() : 0.0;
            auto& slot = terms_[centers_];
            slot.first += unselected;
            slot.second += selected.real();
            return;
        }
        const CMatrix& prev = *steps_[j - 1].eigenvectors;
        const CMatrix& cur = *steps_[j].eigenvectors;
        const Eigen::Index d = steps_[j].eigenvalues->size();
        for (Eigen::Index k2 = 0; k2 < d; ++k2) {
            const Complex left = cur.col(k2).dot(prev.col(k));
            if (left == Complex(0.0)) continue;
            for (Eigen::Index l2 = 0; l2 < d; ++l2) {
                const Complex right = prev.col(l).dot(cur.col(l2));
                if (right == Complex(0.0)) continue;
                centers_[j] = center(j, k2, l2);
                recurse(j + 1, k2, l2, g * left * right * overlap(j, k2, l2));
            }
        }
    }

    const Scenario& scn_;
    const std::vector<StepBasis>& steps_;
    const CMatrix& effect_;
    std::vector<double> centers_;
    std::map<std::vector<double>, std::pair<double, double>> terms_;
};

// log of the unnormalized Gaussian product exp(-sum_j (x_j - m_j)^2 / (2 sigma_j^2)).
double log_kernel(const MixtureTerm& t, std::span<const double> x, std::span<const double> sigmas) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double u = (x[j] - t.centers[j]) / sigmas[j];
        acc -= 0.5 * u * u;
    }
    return acc;
}

struct DensityValues {
    double signed_unselected;
    double absolute_unselected;
    double signed_selected;
};

// Mixture sums at x, all scaled by the same factor exp(-max log kernel).
DensityValues evaluate(const std::vector<MixtureTerm>& terms, std::span<const double> x,
                       std::span<const double> sigmas, std::vector<double>& scratch) {
    scratch.resize(terms.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < terms.size(); ++t) {
        scratch[t] = log_kernel(terms[t], x, sigmas);
        top = std::max(top, scratch[t]);
    }
    DensityValues out{0.0, 0.0, 0.0};
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const double k = std::exp(scratch[t] - top);
        out.signed_unselected += terms[t].weight_unselected * k;
        out.absolute_unselected += std::abs(terms[t].weight_unselected) * k;
        out.signed_selected += terms[t].weight_selected * k;
    }
    return out;
}

// Sequential conditional inverse-CDF sampling on a grid: the marginal of the
// next coordinate given the previous draws is again a signed Gaussian mixture.
std::vector<double> grid_draw(const std::vector<MixtureTerm>& terms, std::span<const double> sigmas,
                              const SamplerOptions& opts, std::mt19937_64& rng) {
    const std::size_t n = sigmas.size();
    std::vector<double> weights(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) weights[t] = terms[t].weight_unselected;
    std::vector<double> x(n);
    std::vector<double> grid(opts.grid_points);
    std::vector<double> cdf(opts.grid_points);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const MixtureTerm& t : terms) {
            lo = std::min(lo, t.centers[j]);
            hi = std::max(hi, t.centers[j]);
        }
        lo -= opts.grid_half_width * sigmas[j];
        hi += opts.grid_half_width * sigmas[j];
        const double step = (hi - lo) / static_cast<double>(opts.grid_points - 1);
        double prev_density = 0.0;
        for (std::size_t g = 0; g < opts.grid_points; ++g) {
            grid[g] = lo + step * static_cast<double>(g);
            double f = 0.0;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                const double u = (grid[g] - terms[t].centers[j]) / sigmas[j];
                f += weights[t] * std::exp(-0.5 * u * u);
            }
            f = std::max(f, 0.0);
            cdf[g] = g == 0 ? 0.0 : cdf[g - 1] + 0.5 * (f + prev_density) * step;
            prev_density = f;
        }
        const double total = cdf.back();
        if (!(total > 0.0)) {
            throw Error(ErrorCode::NumericFailure, "grid sampler: marginal density vanished");
        }
        const double target = unif(rng) * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        const std::size_t idx = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1,
                                                        opts.grid_points - 1);
        const double span = cdf[idx] - cdf[idx - 1];
        const double frac = span > 0.0 ? (target - cdf[idx - 1]) / span : 0.5;
        x[j] = grid[idx - 1] + frac * step;

        double scale = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const double u = (x[j] - terms[t].centers[j]) / sigmas[j];
            weights[t] *= std::exp(-0.5 * u * u);
            scale = std::max(scale, std::abs(weights[t]));
        }
        if (scale > 0.0) {
            for (double& w : weights) w /= scale;
        }
    }
    return x;
}

std::vector<double> step_sigmas(const Scenario& scn) {
    std::vector<double> s;
    for (const MeasurementStep& step : scn.steps()) s.push_back(step.pointer.sigma());
    return s;
}

}  // namespace

std::vector<MixtureTerm> pointer_density_terms(const Scenario& scn, const SamplerOptions& opts) {
    const double d = static_cast<double>(scn.dimension());
    const double count = std::pow(d, 2.0 * static_cast<double>(scn.size()));
    if (count > static_cast<double>(opts.max_terms)) {
        std::ostringstream os;
        os << "pointer density has " << count << " eigenindex terms (limit " << opts.max_terms << ")";
        throw Error(ErrorCode::ScenarioTooLarge, os.str());
    }
    std::vector<StepBasis> steps;
    for (const MeasurementStep& step : scn.steps()) {
        const SpectralDecomposition& sd = step.observable.decomposition();
        steps.push_back({&sd.eigenvalues, &sd.eigenvectors, step.pointer.sigma()});
    }
    const Eigen::Index dim = scn.dimension();
    const CMatrix effect = scn.post() ? scn.post()->matrix() : CMatrix::Identity(dim, dim);
    auto merged = TermBuilder(scn, steps, effect).build();
    std::vector<MixtureTerm> out;
    out.reserve(merged.size());
    for (auto& [centers, w] : merged) {
        if (w.first == 0.0 && w.second == 0.0) continue;
        out.push_back({centers, w.first, w.second});
    }
    return out;
}

double pointer_density(const Scenario& scn, std::span<const double> x) {
    if (x.size() != scn.size()) {
        throw Error(ErrorCode::DimensionMismatch, "pointer_density: one coordinate per step required");
    }
    const auto terms = pointer_density_terms(scn);
    const auto sigmas = step_sigmas(scn);
    double norm = 1.0;
    double selected_total = 0.0;
    double value = 0.0;
    for (const MixtureTerm& t : terms) {
        selected_total += t.weight_selected;
        value += t.weight_selected * std::exp(log_kernel(t, x, sigmas));
    }
    for (double s : sigmas) norm *= std::sqrt(2.0 * std::numbers::pi) * s;
    if (!(selected_total > kZeroProbabilityTol)) {
        throw Error(ErrorCode::ZeroPostSelectionProbability, "pointer density: Tr(eta) vanishes");
    }
    return value / (norm * selected_total);
}

SampleSet sample_outcomes(const Scenario& scn, std::uint64_t shots, std::uint64_t seed, const SamplerOptions& opts) {
    if (shots < 1) {
        throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
    }
    const auto terms = pointer_density_terms(scn, opts);
    const auto sigmas = step_sigmas(scn);
    const std::size_t n = sigmas.size();

    SampleSet out;
    out.stats.mixture_terms = terms.size();
    std::vector<double> abs_weights;
    double envelope = 0.0;
    double selected_total = 0.0;
    for (const MixtureTerm& t : terms) {
        abs_weights.push_back(std::abs(t.weight_unselected));
        envelope += std::abs(t.weight_unselected);
        selected_total += t.weight_selected;
    }
    if (scn.post() && !(selected_total > kZeroProbabilityTol)) {
        throw Error(ErrorCode::ZeroPostSelectionProbability, "sampler: Tr(eta) vanishes");
    }
    out.stats.envelope_constant = envelope;
    out.stats.grid_fallback = !(envelope <= opts.max_envelope_constant) || !std::isfinite(envelope);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::discrete_distribution<std::size_t> pick(abs_weights.begin(), abs_weights.end());
    std::vector<double> scratch;
    std::vector<double> x(n);

    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        if (out.stats.grid_fallback) {
            x = grid_draw(terms, sigmas, opts, rng);
            ++out.stats.proposals;
        } else {
            for (;;) {
                ++out.stats.proposals;
                const MixtureTerm& t = terms[pick(rng)];
                for (std::size_t j = 0; j < n; ++j) x[j] = t.centers[j] + sigmas[j] * normal(rng);
                const DensityValues dv = evaluate(terms, x, sigmas, scratch);
                const double accept = dv.absolute_unselected > 0.0 ? dv.signed_unselected / dv.absolute_unselected : 0.0;
                if (unif(rng) < accept) break;
            }
        }
        ++out.stats.shots;
        if (scn.post()) {
            const DensityValues dv = evaluate(terms, x, sigmas, scratch);
            const double keep = dv.signed_unselected > 0.0
                                    ? std::clamp(dv.signed_selected / dv.signed_unselected, 0.0, 1.0)
                                    : 0.0;
            if (!(unif(rng) < keep)) continue;
        }
        ++out.stats.retained;
        out.positions.push_back(x);
    }
    return out;
}

SampleSummary summarize_product(const SampleSet& samples, const MomentPattern& pattern) {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (const auto& x : samples.positions) {
        if (x.size() != pattern.size()) {
            throw Error(ErrorCode::PatternLengthMismatch, "sample tuple length differs from pattern length");
        }
        double prod = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            switch (pattern[j]) {
                case PointerOperatorKind::Identity: break;
                case PointerOperatorKind::Position: prod *= x[j]; break;
                case PointerOperatorKind::PositionSquared: prod *= x[j] * x[j]; break;
                default:
                    throw Error(ErrorCode::UnsupportedKind, "position samples cannot estimate momentum moments");
            }
        }
        ++count;
        const double delta = prod - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (prod - mean);
    }
    const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    return {mean, count > 0 ? std::sqrt(var / static_cast<double>(count)) : 0.0, count};
}

}  // namespace weaklab
