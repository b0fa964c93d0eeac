#include "weaklab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaklab/bounds.hpp"
#include "weaklab/error.hpp"
#include "weaklab/optimizer.hpp"
#include "weaklab/sampler.hpp"
#include "weaklab/scenario_io.hpp"
#include "weaklab/scenarios.hpp"
#include "weaklab/simulator.hpp"

namespace weaklab {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kDefaultSigma = 50.0;
constexpr double kPairBound = -0.125;

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const ojson& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return number(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

struct Report {
    std::string command;
    ojson config = ojson::object();
    ojson results;  // array of flat rows, or a single object
    int exit_code = 0;
};

void drop_negative_zero(ojson& v) {
    if (v.is_number_float() && v.get<double>() == 0.0) v = 0.0;
    if (v.is_structured())
        for (auto& child : v) drop_negative_zero(child);
}

void emit(const Report& r, const std::string& format, std::ostream& out) {
    if (format == "json") {
        ojson doc;
        doc["command"] = r.command;
        doc["version"] = kVersion;
        doc["config"] = r.config;
        doc["results"] = r.results;
        drop_negative_zero(doc);
        out << doc.dump(2) << '\n';
        return;
    }
    if (r.results.is_array()) {
        if (r.results.empty()) return;
        bool first = true;
        for (const auto& [key, _] : r.results.front().items()) {
            out << (first ? "" : ",") << key;
            first = false;
        }
        out << '\n';
        for (const auto& row : r.results) {
            first = true;
            for (const auto& [_, v] : row.items()) {
                out << (first ? "" : ",") << csv_cell(v);
                first = false;
            }
            out << '\n';
        }
        return;
    }
    out << "key,value\n";
    for (const auto& [key, v] : r.results.items()) out << key << ',' << csv_cell(v) << '\n';
}

struct SigmaOverrides {
    double sigma = kDefaultSigma;
    std::optional<double> sigma1;  // unset: use sigma
    std::optional<double> sigma2;

    double first() const { return sigma1.value_or(sigma); }
    double second() const { return sigma2.value_or(sigma); }

    void add_to(CLI::App* cmd) {
        cmd->add_option("--sigma", sigma, "Pointer width for every step")->capture_default_str();
        cmd->add_option("--sigma1", sigma1, "Width of the first pointer");
        cmd->add_option("--sigma2", sigma2, "Width of the second pointer");
    }

};

const Observable& illustrative_projector(int j) {
    static const Observable p1 = projector_from_ket(illustrative_ket(1));
    static const Observable p2 = projector_from_ket(illustrative_ket(2));
    return j == 1 ? p1 : p2;
}

Scenario named_scenario(const std::string& name, const SigmaOverrides& s, int n) {
    if (name == "illustrative") return build_illustrative(s.first(), s.second());
    if (name == "pauli-xy") return build_pauli_xy(s.first(), s.second());
    if (name == "chain-n") {
        Scenario scn = build_projector_chain(n, s.sigma);
        if (s.sigma1) scn = scn.with_sigma(0, *s.sigma1);
        if (s.sigma2 && n >= 2) scn = scn.with_sigma(1, *s.sigma2);
        return scn;
    }
    if (name == "common-cause") {
        CVector bell = CVector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        return build_common_cause(PureState(bell), illustrative_projector(1), illustrative_projector(2), s.first(),
                                  s.second());
    }
    throw Error(ErrorCode::UnknownScenario,
                "'" + name + "' (known: illustrative, pauli-xy, chain-n, common-cause)");
}

std::pair<double, double> scenario_hull(const Scenario& scn) {
    std::vector<Observable> obs;
    for (const auto& step : scn.steps()) obs.push_back(step.observable);
    return spectrum_hull(obs);
}

MomentPattern pattern_or_default(const std::string& text, const Scenario& scn) {
    MomentPattern pat =
        text.empty() ? MomentPattern::uniform(scn.size(), PointerOperatorKind::Position) : MomentPattern::parse(text);
    if (pat.size() != scn.size()) {
        throw Error(ErrorCode::PatternLengthMismatch, "pattern '" + pat.to_string() + "' has " +
                                                          std::to_string(pat.size()) + " slots, scenario has " +
                                                          std::to_string(scn.size()) + " steps");
    }
    return pat;
}

MomentMethod parse_method(const std::string& text) {
    if (text == "exact") return MomentMethod::Exact;
    if (text == "weak") return MomentMethod::WeakRegime;
    throw Error(ErrorCode::InvalidArgument, "method must be exact or weak, got '" + text + "'");
}

OptimizerObjective parse_objective(const std::string& text) {
    for (auto o : {OptimizerObjective::PointerProduct, OptimizerObjective::WeakValueReal,
                   OptimizerObjective::ExactPointerProduct}) {
        if (text == to_string(o)) return o;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown objective '" + text + "'");
}

ojson sigmas_json(const Scenario& scn) {
    ojson arr = ojson::array();
    for (const auto& step : scn.steps()) arr.push_back(step.pointer.sigma());
    return arr;
}

ojson quantity(const std::string& name, const ojson& re, const ojson& im = nullptr) {
    return {{"quantity", name}, {"re", re}, {"im", im}};
}

// scenario

struct ScenarioArgs {
    std::string name;
    SigmaOverrides sigmas;
    int n = 2;
    double ratio = kDefaultWeakRatio;
    double margin = 1e-9;
    std::string export_path;
};

Report cmd_scenario(const ScenarioArgs& a) {
    Report r;
    r.command = "scenario";
    Scenario scn = named_scenario(a.name, a.sigmas, a.n);
    if (!a.export_path.empty()) save_scenario(scn, a.export_path);

    MomentPattern pat = MomentPattern::uniform(scn.size(), PointerOperatorKind::Position);
    MomentResult exact = exact_moment(scn, pat);
    MomentResult weak = weak_prediction(scn, pat);
    WeakValue wv = seq_weak_value(scn.initial(), scn.post(), scn.sequence());
    Complex rec_exact = recover_weak_value(scn, MomentMethod::Exact);
    Complex rec_weak = recover_weak_value(scn, MomentMethod::WeakRegime);
    auto hull = scenario_hull(scn);
    CausalVerdict verdict = causal_witness(exact.value, hull, a.margin);

    r.config = {{"name", a.name}, {"pattern", pat.to_string()}, {"sigmas", sigmas_json(scn)},
                {"ratio", a.ratio},  {"margin", a.margin}};
    if (a.name == "chain-n") r.config["n"] = a.n;
    r.results = ojson::array({
        quantity("exact_moment", exact.value),
        quantity("weak_moment", weak.value),
        quantity("postselection_probability", exact.postselection_probability),
        quantity("sequential_weak_value", wv.value.real(), wv.value.imag()),
        quantity("recovered_weak_value_exact", rec_exact.real(), rec_exact.imag()),
        quantity("recovered_weak_value_weak", rec_weak.real(), rec_weak.imag()),
        quantity("hull_min", hull.first),
        quantity("hull_max", hull.second),
        quantity("witness", std::string(to_string(verdict.verdict))),
        quantity("weak_regime", scenario_weak_regime(scn, a.ratio)),
    });
    return r;
}

// simulate

Report cmd_simulate(const std::string& file, const std::string& pattern, const std::string& method) {
    Report r;
    r.command = "simulate";
    Scenario scn = load_scenario(file);
    MomentPattern pat = pattern_or_default(pattern, scn);
    MomentMethod m = parse_method(method);
    MomentResult res = evaluate_moment(scn, pat, m);
    r.config = {{"file", file}, {"pattern", pat.to_string()}, {"method", std::string(to_string(m))},
                {"sigmas", sigmas_json(scn)}};
    r.results = {{"moment", res.value}, {"postselection_probability", res.postselection_probability}};
    return r;
}

// sweep

struct SweepArgs {
    std::string file;
    std::string param = "sigma1";
    double from = 0.05;
    double to = 100.0;
    int steps = 20;
    std::string pattern;
};

std::size_t sigma_index(const std::string& param, std::size_t size) {
    const std::string prefix = "sigma";
    if (param.rfind(prefix, 0) == 0 && param.size() > prefix.size()) {
        std::size_t idx = 0;
        const char* begin = param.data() + prefix.size();
        const char* end = param.data() + param.size();
        auto [ptr, ec] = std::from_chars(begin, end, idx);
        if (ec == std::errc() && ptr == end && idx >= 1 && idx <= size) return idx - 1;
    }
    throw Error(ErrorCode::UnknownParameter,
                "'" + param + "' (expected sigma1..sigma" + std::to_string(size) + ")");
}

Report cmd_sweep(const SweepArgs& a) {
    Report r;
    r.command = "sweep";
    Scenario scn = load_scenario(a.file);
    std::size_t idx = sigma_index(a.param, scn.size());
    MomentPattern pat = pattern_or_default(a.pattern, scn);
    if (!(a.from > 0.0) || !(a.to > 0.0)) throw Error(ErrorCode::InvalidArgument, "sweep bounds must be > 0");
    if (a.steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be >= 1");

    r.config = {{"file", a.file}, {"param", a.param}, {"from", a.from}, {"to", a.to},
                {"steps", a.steps},  {"pattern", pat.to_string()}, {"spacing", "geometric"}};
    r.results = ojson::array();
    const double ratio = std::log(a.to / a.from);
    for (int i = 0; i < a.steps; ++i) {
        double v = a.steps == 1 ? a.from : a.from * std::exp(ratio * i / (a.steps - 1));
        if (i == a.steps - 1) v = a.to;
        Scenario s = scn.with_sigma(idx, v);
        double exact = exact_moment(s, pat).value;
        double weak = weak_prediction(s, pat).value;
        r.results.push_back({{a.param, v}, {"exact", exact}, {"weak", weak}, {"abs_difference", std::abs(exact - weak)}});
    }
    return r;
}

// optimize

struct OptimizeArgs {
    int n = 2;
    int dim = 2;
    int restarts = 64;
    std::uint64_t seed = 0;
    std::int64_t budget = 20000;
    std::string objective = "pointer-product";
    double sigma = 10.0;
};

ojson state_json(std::span<const double> params, int d) {
    ojson arr = ojson::array();
    CVector v = decode_amplitudes(params, d);
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_json(v(i)));
    return arr;
}

Report cmd_optimize(const OptimizeArgs& a) {
    Report r;
    r.command = "optimize";
    OptimizerConfig cfg;
    cfg.n = a.n;
    cfg.d = a.dim;
    cfg.restarts = a.restarts;
    cfg.seed = a.seed;
    cfg.budget = a.budget;
    cfg.objective = parse_objective(a.objective);
    cfg.exact_sigma = a.sigma;
    OptimizationResult res = minimize(cfg);

    r.config = {{"n", a.n},           {"dim", a.dim},         {"restarts", a.restarts},
                {"seed", a.seed},     {"budget", a.budget},   {"objective", a.objective}};
    if (cfg.objective == OptimizerObjective::ExactPointerProduct) r.config["sigma"] = a.sigma;

    ojson projectors = ojson::array();
    for (const auto& p : res.best_point.projector_params) projectors.push_back(state_json(p, a.dim));
    ojson trace = ojson::array();
    for (const auto& [idx, value] : res.trace) trace.push_back({{"restart", idx}, {"value", value}});

    // Values below the pair bound are the conjecture's counterexample candidates.
    const bool finding = cfg.objective != OptimizerObjective::WeakValueReal && res.best_value < kPairBound - 1e-9;
    r.results = {{"best_value", res.best_value},
                 {"below_pair_bound", finding},
                 {"evaluations", res.evaluations},
                 {"restarts_used", res.restarts_used},
                 {"best_state", state_json(res.best_point.state_params, a.dim)},
                 {"best_projectors", projectors},
                 {"trace", trace}};
    return r;
}

// sample

struct SampleArgs {
    std::string source;
    SigmaOverrides sigmas;
    int n = 2;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    std::string pattern;
    double witness_se = 3.0;
};

Report cmd_sample(const SampleArgs& a) {
    Report r;
    r.command = "sample";
    const bool from_file = std::filesystem::is_regular_file(a.source);
    Scenario scn = from_file ? load_scenario(a.source) : named_scenario(a.source, a.sigmas, a.n);
    MomentPattern pat = pattern_or_default(a.pattern, scn);
    SampleSet set = sample_outcomes(scn, a.shots, a.seed);
    SampleSummary sum = summarize_product(set, pat);
    double exact = exact_moment(scn, pat).value;
    double z = sum.standard_error > 0 ? std::abs(sum.mean - exact) / sum.standard_error : 0.0;

    r.config = {{"source", a.source}, {"pattern", pat.to_string()}, {"sigmas", sigmas_json(scn)},
                {"shots", a.shots},   {"seed", a.seed}};
    r.results = {{"mean", sum.mean},
                 {"standard_error", sum.standard_error},
                 {"count", sum.count},
                 {"exact", exact},
                 {"z_score", z},
                 {"within_4se", z <= 4.0},
                 {"proposals", set.stats.proposals},
                 {"retained", set.stats.retained},
                 {"acceptance_rate", set.stats.acceptance_rate()},
                 {"retention_rate", set.stats.retention_rate()},
                 {"envelope_constant", set.stats.envelope_constant},
                 {"mixture_terms", set.stats.mixture_terms},
                 {"grid_fallback", set.stats.grid_fallback}};
    bool all_position = true;
    for (auto k : pat.kinds()) all_position = all_position && k == PointerOperatorKind::Position;
    if (all_position) {
        auto hull = scenario_hull(scn);
        CausalVerdict v = causal_witness(sum.mean, hull, a.witness_se * sum.standard_error);
        r.results["hull_min"] = hull.first;
        r.results["hull_max"] = hull.second;
        r.results["witness"] = std::string(to_string(v.verdict));
    }
    return r;
}

// bounds

Report cmd_bounds(std::uint64_t trials, std::uint64_t seed) {
    Report r;
    r.command = "bounds";
    r.config = {{"trials", trials}, {"seed", seed}};
    r.results = ojson::array();
    for (const auto& rep : {projector_pair_suite(trials, seed), norm_product_suite(trials, seed),
                            commuting_hull_suite(trials, seed)}) {
        r.results.push_back({{"suite", rep.name},
                             {"trials", rep.trials},
                             {"violations", rep.violations},
                             {"worst_value", rep.worst_value},
                             {"worst_margin", rep.worst_margin}});
        if (rep.violations > 0) r.exit_code = 1;
    }
    return r;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequential weak measurement simulator", "weaklab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string format = "json";
    bool timing = false;

    std::function<Report()> action;

    ScenarioArgs sc;
    auto* scenario = app.add_subcommand("scenario", "Evaluate a built-in scenario");
    scenario->add_option("name", sc.name, "illustrative, pauli-xy, chain-n or common-cause")->required();
    sc.sigmas.add_to(scenario);
    scenario->add_option("--n", sc.n, "Chain length for chain-n")->capture_default_str();
    scenario->add_option("--ratio", sc.ratio, "Weak-regime ratio")->capture_default_str();
    scenario->add_option("--margin", sc.margin, "Witness margin")->capture_default_str();
    scenario->add_option("--export", sc.export_path, "Write the scenario as JSON to this path");
    scenario->callback([&] { action = [&] { return cmd_scenario(sc); }; });

    std::string sim_file, sim_pattern, sim_method = "exact";
    auto* simulate = app.add_subcommand("simulate", "Evaluate one pointer moment of a scenario file");
    simulate->add_option("file", sim_file, "Scenario JSON file")->required();
    simulate->add_option("--pattern", sim_pattern, "Moment pattern over i, x, X, p, P (default all x)");
    simulate->add_option("--method", sim_method, "exact or weak")->capture_default_str();
    simulate->callback([&] { action = [&] { return cmd_simulate(sim_file, sim_pattern, sim_method); }; });

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Sweep one pointer width geometrically");
    sweep->add_option("file", sw.file, "Scenario JSON file")->required();
    sweep->add_option("--param", sw.param, "sigmaJ, 1-based")->capture_default_str();
    sweep->add_option("--from", sw.from)->capture_default_str();
    sweep->add_option("--to", sw.to)->capture_default_str();
    sweep->add_option("--steps", sw.steps)->capture_default_str();
    sweep->add_option("--pattern", sw.pattern, "Moment pattern (default all x)");
    sweep->callback([&] { action = [&] { return cmd_sweep(sw); }; });

    OptimizeArgs op;
    auto* optimize = app.add_subcommand("optimize", "Multi-start minimization over states and projectors");
    optimize->add_option("--n", op.n, "Number of projectors")->capture_default_str();
    optimize->add_option("--dim", op.dim, "Hilbert-space dimension")->capture_default_str();
    optimize->add_option("--restarts", op.restarts)->capture_default_str();
    optimize->add_option("--seed", op.seed)->capture_default_str();
    optimize->add_option("--budget", op.budget, "Objective evaluations per restart")->capture_default_str();
    optimize->add_option("--objective", op.objective)
        ->check(CLI::IsMember({"pointer-product", "weak-value", "exact-pointer-product"}))
        ->capture_default_str();
    optimize->add_option("--sigma", op.sigma, "Pointer width for exact-pointer-product")->capture_default_str();
    optimize->callback([&] { action = [&] { return cmd_optimize(op); }; });

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Monte-Carlo pointer readouts");
    sample->add_option("source", sa.source, "Scenario name or JSON file")->required();
    sa.sigmas.add_to(sample);
    sample->add_option("--n", sa.n, "Chain length for chain-n")->capture_default_str();
    sample->add_option("--shots", sa.shots)->capture_default_str();
    sample->add_option("--seed", sa.seed)->capture_default_str();
    sample->add_option("--pattern", sa.pattern, "Product pattern over i, x, X (default all x)");
    sample->add_option("--witness-se", sa.witness_se, "Witness margin in standard errors")->capture_default_str();
    sample->callback([&] { action = [&] { return cmd_sample(sa); }; });

    std::uint64_t b_trials = 10000, b_seed = 1;
    auto* bounds = app.add_subcommand("bounds", "Randomized bound suites");
    bounds->add_option("--trials", b_trials)->capture_default_str();
    bounds->add_option("--seed", b_seed)->capture_default_str();
    bounds->callback([&] { action = [&] { return cmd_bounds(b_trials, b_seed); }; });

    for (auto* cmd : {scenario, simulate, optimize, sample, bounds}) {
        cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_flag("--timing", timing, "Print elapsed time to stderr");
    }
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
    sweep->add_flag("--timing", timing, "Print elapsed time to stderr");
    sweep->preparse_callback([&](std::size_t) { format = "csv"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        auto start = std::chrono::steady_clock::now();
        Report report = action();
        emit(report, format, out);
        if (timing) {
            std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
            err << report.command << ": " << number(dt.count()) << " s\n";
        }
        return report.exit_code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace weaklab
